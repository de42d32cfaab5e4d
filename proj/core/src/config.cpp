// Copyright 2026 The mitodet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mitodet/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mitodet/error.hpp"
#include "mitodet/formats.hpp"

namespace mitodet {

using nlohmann::json;

bool operator==(const PipelineConfig& a, const PipelineConfig& b) {
  return a.seed == b.seed && a.tile_size == b.tile_size && a.box_size == b.box_size &&
         a.drop_prob == b.drop_prob && a.augmentation == b.augmentation &&
         a.anchors == b.anchors && a.nms_iou == b.nms_iou && a.eval_iou == b.eval_iou;
}

void validate_config(const PipelineConfig& config) {
  if (config.tile_size < 1) throw ValidationError("config: tile_size must be >= 1");
  if (config.box_size <= 0.0) throw ValidationError("config: box_size must be > 0");
  if (!(config.drop_prob >= 0.0 && config.drop_prob <= 1.0)) {
    throw ValidationError("config: drop_prob must be in [0,1]");
  }
  validate_policy(config.augmentation);
  if (config.anchors.strides.empty()) throw ValidationError("config: anchors.strides is empty");
  for (int s : config.anchors.strides) {
    if (s < 1) throw ValidationError("config: anchor strides must be >= 1");
  }
  if (config.anchors.scale < 1.0) throw ValidationError("config: anchors.scale must be >= 1");
  if (!(config.anchors.pos_iou > config.anchors.neg_iou)) {
    throw ValidationError("config: anchors.pos_iou must exceed anchors.neg_iou");
  }
  if (config.anchors.batch_size == 0) throw ValidationError("config: anchors.batch_size must be >= 1");
  if (!(config.anchors.positive_fraction > 0.0 && config.anchors.positive_fraction <= 1.0)) {
    throw ValidationError("config: anchors.positive_fraction must be in (0,1]");
  }
  if (!(config.nms_iou >= 0.0 && config.nms_iou <= 1.0)) {
    throw ValidationError("config: nms_iou must be in [0,1]");
  }
  if (!(config.eval_iou >= 0.0 && config.eval_iou <= 1.0)) {
    throw ValidationError("config: eval_iou must be in [0,1]");
  }
}

namespace {

[[noreturn]] void bad_key(const std::string& origin, const std::string& key) {
  throw ParseError(origin + ": unknown config key '" + key + "'");
}

void expect_keys(const json& obj, const std::set<std::string>& allowed, const std::string& origin,
                 const std::string& scope) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) bad_key(origin, scope.empty() ? key : scope + "." + key);
  }
}

template <typename T>
void read_field(const json& obj, const char* key, T& out, const std::string& origin) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(origin + ": config key '" + std::string(key) + "' has the wrong type");
  }
}

void read_color_op(const json& obj, const char* key, ColorOpParams& out, const std::string& origin) {
  if (!obj.contains(key)) return;
  const json& op = obj.at(key);
  if (!op.is_object()) throw ParseError(origin + ": '" + std::string(key) + "' must be an object");
  expect_keys(op, {"prob", "range"}, origin, key);
  read_field(op, "prob", out.prob, origin);
  if (op.contains("range")) {
    const json& range = op.at("range");
    if (!range.is_array() || range.size() != 2 || !range[0].is_number() || !range[1].is_number()) {
      throw ParseError(origin + ": '" + std::string(key) + ".range' must be [lo, hi]");
    }
    out.lo = range[0].get<double>();
    out.hi = range[1].get<double>();
  }
}

json color_op_to_json(const ColorOpParams& op) {
  return json{{"prob", op.prob}, {"range", json::array({op.lo, op.hi})}};
}

}  // namespace

PipelineConfig config_from_json_text(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": invalid JSON: " + e.what());
  }
  if (!root.is_object()) throw ParseError(origin + ": config root must be an object");

  PipelineConfig config;
  expect_keys(root,
              {"seed", "tile_size", "box_size", "drop_prob", "augmentation", "anchors", "nms_iou",
               "eval_iou"},
              origin, "");
  read_field(root, "seed", config.seed, origin);
  read_field(root, "tile_size", config.tile_size, origin);
  read_field(root, "box_size", config.box_size, origin);
  read_field(root, "drop_prob", config.drop_prob, origin);
  read_field(root, "nms_iou", config.nms_iou, origin);
  read_field(root, "eval_iou", config.eval_iou, origin);

  if (root.contains("augmentation")) {
    const json& aug = root.at("augmentation");
    if (!aug.is_object()) throw ParseError(origin + ": 'augmentation' must be an object");
    expect_keys(aug, {"brightness", "hue", "contrast", "saturation", "flip_prob_per_axis"}, origin,
                "augmentation");
    read_color_op(aug, "brightness", config.augmentation.brightness, origin);
    read_color_op(aug, "hue", config.augmentation.hue, origin);
    read_color_op(aug, "contrast", config.augmentation.contrast, origin);
    read_color_op(aug, "saturation", config.augmentation.saturation, origin);
    read_field(aug, "flip_prob_per_axis", config.augmentation.flip_prob_per_axis, origin);
  }

  if (root.contains("anchors")) {
    const json& anchors = root.at("anchors");
    if (!anchors.is_object()) throw ParseError(origin + ": 'anchors' must be an object");
    expect_keys(anchors,
                {"strides", "scale", "pos_iou", "neg_iou", "batch_size", "positive_fraction"},
                origin, "anchors");
    read_field(anchors, "strides", config.anchors.strides, origin);
    read_field(anchors, "scale", config.anchors.scale, origin);
    read_field(anchors, "pos_iou", config.anchors.pos_iou, origin);
    read_field(anchors, "neg_iou", config.anchors.neg_iou, origin);
    read_field(anchors, "batch_size", config.anchors.batch_size, origin);
    read_field(anchors, "positive_fraction", config.anchors.positive_fraction, origin);
  }

  validate_config(config);
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return config_from_json_text(buffer.str(), path.string());
}

std::string config_to_json_text(const PipelineConfig& config) {
  const json root{
      {"seed", config.seed},
      {"tile_size", config.tile_size},
      {"box_size", config.box_size},
      {"drop_prob", config.drop_prob},
      {"augmentation",
       {{"brightness", color_op_to_json(config.augmentation.brightness)},
        {"hue", color_op_to_json(config.augmentation.hue)},
        {"contrast", color_op_to_json(config.augmentation.contrast)},
        {"saturation", color_op_to_json(config.augmentation.saturation)},
        {"flip_prob_per_axis", config.augmentation.flip_prob_per_axis}}},
      {"anchors",
       {{"strides", config.anchors.strides},
        {"scale", config.anchors.scale},
        {"pos_iou", config.anchors.pos_iou},
        {"neg_iou", config.anchors.neg_iou},
        {"batch_size", config.anchors.batch_size},
        {"positive_fraction", config.anchors.positive_fraction}}},
      {"nms_iou", config.nms_iou},
      {"eval_iou", config.eval_iou},
  };
  return root.dump(2) + "\n";
}

void save_config(const std::filesystem::path& path, const PipelineConfig& config) {
  atomic_write_text(path, config_to_json_text(config));
}

}  // namespace mitodet
