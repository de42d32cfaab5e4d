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

#include "mitodet/formats.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mitodet/error.hpp"
#include "mitodet/png_io.hpp"

namespace mitodet {

using nlohmann::json;

void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + tmp.string());
    out << content;
    if (!out.good()) throw IoError("failed while writing: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move file into place: " + path.string() + ": " + ec.message());
}

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": invalid JSON: " + e.what());
  }
}

template <typename T>
T get_field(const json& obj, const char* key, const std::string& origin) {
  if (!obj.contains(key)) {
    throw ParseError(origin + ": missing required field '" + std::string(key) + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(origin + ": field '" + std::string(key) + "' has the wrong type");
  }
}

json annotation_to_json(const Annotation& ann, bool with_truncated) {
  json out{{"x", ann.box.x()},
           {"y", ann.box.y()},
           {"w", ann.box.w()},
           {"h", ann.box.h()},
           {"label", std::string(to_string(ann.label))}};
  if (with_truncated) out["truncated"] = ann.truncated;
  return out;
}

Annotation annotation_from_json(const json& obj, const std::string& origin) {
  const double x = get_field<double>(obj, "x", origin);
  const double y = get_field<double>(obj, "y", origin);
  const double w = get_field<double>(obj, "w", origin);
  const double h = get_field<double>(obj, "h", origin);
  const std::string label = get_field<std::string>(obj, "label", origin);
  Annotation ann{Box(x, y, w, h), label_from_string(label), false};
  if (obj.contains("truncated")) ann.truncated = get_field<bool>(obj, "truncated", origin);
  return ann;
}

}  // namespace

std::vector<SlideRecord> manifest_from_json_text(const std::string& text,
                                                 const std::string& origin) {
  const json root = parse_json(text, origin);
  if (!root.is_object() || !root.contains("slides") || !root.at("slides").is_array()) {
    throw ParseError(origin + ": manifest must be an object with a 'slides' array");
  }

  std::vector<SlideRecord> slides;
  for (const json& entry : root.at("slides")) {
    SlideRecord slide;
    slide.slide_id = get_field<std::string>(entry, "slide_id", origin);
    slide.scanner_id = get_field<std::string>(entry, "scanner_id", origin);
    slide.width = get_field<int>(entry, "width", origin);
    slide.height = get_field<int>(entry, "height", origin);
    if (entry.contains("image")) slide.image_source = get_field<std::string>(entry, "image", origin);
    if (entry.contains("annotations")) {
      for (const json& ann : entry.at("annotations")) {
        try {
          slide.annotations.push_back(annotation_from_json(ann, origin));
        } catch (const ValidationError& e) {
          throw ParseError(origin + ": slide '" + slide.slide_id + "': " + e.what());
        }
      }
    }
    validate_slide(slide);
    slides.push_back(std::move(slide));
  }

  std::vector<std::string> ids;
  for (const SlideRecord& s : slides) ids.push_back(s.slide_id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw ValidationError(origin + ": duplicate slide_id in manifest");
  }
  return slides;
}

std::vector<SlideRecord> load_manifest(const std::filesystem::path& path) {
  return manifest_from_json_text(read_text(path), path.string());
}

std::string manifest_to_json_text(const std::vector<SlideRecord>& slides) {
  json list = json::array();
  for (const SlideRecord& slide : slides) {
    json entry{{"slide_id", slide.slide_id},
               {"scanner_id", slide.scanner_id},
               {"width", slide.width},
               {"height", slide.height}};
    if (!slide.image_source.empty()) entry["image"] = slide.image_source;
    json anns = json::array();
    for (const Annotation& ann : slide.annotations) anns.push_back(annotation_to_json(ann, false));
    entry["annotations"] = std::move(anns);
    list.push_back(std::move(entry));
  }
  return json{{"slides", std::move(list)}}.dump(2) + "\n";
}

void save_manifest(const std::filesystem::path& path, const std::vector<SlideRecord>& slides) {
  atomic_write_text(path, manifest_to_json_text(slides));
}

std::string tile_image_name(const Tile& tile) {
  return tile.slide_id + "_x" + std::to_string(tile.origin_x) + "_y" +
         std::to_string(tile.origin_y) + ".png";
}

std::string tiles_manifest_to_json_text(const std::vector<Tile>& tiles, int tile_size) {
  json list = json::array();
  for (const Tile& tile : tiles) {
    json entry{{"slide_id", tile.slide_id},
               {"origin_x", tile.origin_x},
               {"origin_y", tile.origin_y},
               {"size", tile.size}};
    if (tile.pixels) entry["image"] = tile_image_name(tile);
    json anns = json::array();
    for (const Annotation& ann : tile.annotations) anns.push_back(annotation_to_json(ann, true));
    entry["annotations"] = std::move(anns);
    list.push_back(std::move(entry));
  }
  return json{{"tile_size", tile_size}, {"tiles", std::move(list)}}.dump(2) + "\n";
}

void save_tiles_manifest(const std::filesystem::path& path, const std::vector<Tile>& tiles,
                         int tile_size) {
  atomic_write_text(path, tiles_manifest_to_json_text(tiles, tile_size));
}

std::vector<Tile> load_tiles_manifest(const std::filesystem::path& path, bool load_pixels) {
  const std::string origin = path.string();
  const json root = parse_json(read_text(path), origin);
  if (!root.is_object() || !root.contains("tiles") || !root.at("tiles").is_array()) {
    throw ParseError(origin + ": tiles manifest must be an object with a 'tiles' array");
  }

  std::vector<Tile> tiles;
  for (const json& entry : root.at("tiles")) {
    Tile tile;
    tile.slide_id = get_field<std::string>(entry, "slide_id", origin);
    tile.origin_x = get_field<int>(entry, "origin_x", origin);
    tile.origin_y = get_field<int>(entry, "origin_y", origin);
    tile.size = get_field<int>(entry, "size", origin);
    if (entry.contains("annotations")) {
      for (const json& ann : entry.at("annotations")) {
        tile.annotations.push_back(annotation_from_json(ann, origin));
      }
    }
    if (load_pixels && entry.contains("image")) {
      tile.pixels = read_png(path.parent_path() / get_field<std::string>(entry, "image", origin));
    }
    tiles.push_back(std::move(tile));
  }
  return tiles;
}

namespace {

json plan_to_json(const SplitPlan& plan) {
  return json{{"seed", plan.seed},
              {"train", plan.train},
              {"validation", plan.validation},
              {"test", plan.test}};
}

SplitPlan plan_from_json(const json& obj, const std::string& origin) {
  SplitPlan plan;
  plan.seed = get_field<std::uint64_t>(obj, "seed", origin);
  plan.train = get_field<std::vector<std::string>>(obj, "train", origin);
  plan.validation = get_field<std::vector<std::string>>(obj, "validation", origin);
  plan.test = get_field<std::vector<std::string>>(obj, "test", origin);
  return plan;
}

}  // namespace

std::string split_plan_to_json_text(const SplitPlan& plan) { return plan_to_json(plan).dump(2) + "\n"; }

SplitPlan split_plan_from_json_text(const std::string& text, const std::string& origin) {
  return plan_from_json(parse_json(text, origin), origin);
}

void save_split_plan(const std::filesystem::path& path, const SplitPlan& plan) {
  atomic_write_text(path, split_plan_to_json_text(plan));
}

SplitPlan load_split_plan(const std::filesystem::path& path) {
  return split_plan_from_json_text(read_text(path), path.string());
}

void save_split_folds(const std::filesystem::path& path, const std::vector<SplitPlan>& folds,
                      const std::vector<std::string>& held_out_scanners) {
  if (folds.size() != held_out_scanners.size()) {
    throw ValidationError("save_split_folds: one held-out scanner per fold required");
  }
  json list = json::array();
  for (std::size_t i = 0; i < folds.size(); ++i) {
    json entry = plan_to_json(folds[i]);
    entry["held_out_scanner"] = held_out_scanners[i];
    list.push_back(std::move(entry));
  }
  atomic_write_text(path, json{{"folds", std::move(list)}}.dump(2) + "\n");
}

std::string report_to_json_text(const EvalReport& report) {
  return json{{"tp", report.tp},
              {"fp", report.fp},
              {"fn", report.fn},
              {"precision", report.precision},
              {"recall", report.recall},
              {"f1", report.f1},
              {"threshold", report.threshold},
              {"iou_threshold", report.iou_threshold}}
             .dump(2) +
         "\n";
}

EvalReport report_from_json_text(const std::string& text, const std::string& origin) {
  const json obj = parse_json(text, origin);
  EvalReport report;
  report.tp = get_field<std::int64_t>(obj, "tp", origin);
  report.fp = get_field<std::int64_t>(obj, "fp", origin);
  report.fn = get_field<std::int64_t>(obj, "fn", origin);
  report.precision = get_field<double>(obj, "precision", origin);
  report.recall = get_field<double>(obj, "recall", origin);
  report.f1 = get_field<double>(obj, "f1", origin);
  report.threshold = get_field<double>(obj, "threshold", origin);
  report.iou_threshold = get_field<double>(obj, "iou_threshold", origin);
  return report;
}

void save_report(const std::filesystem::path& path, const EvalReport& report) {
  atomic_write_text(path, report_to_json_text(report));
}

EvalReport load_report(const std::filesystem::path& path) {
  return report_from_json_text(read_text(path), path.string());
}

std::string format_report_table(const EvalReport& report) {
  std::ostringstream out;
  out << "  tp         " << report.tp << "\n"
      << "  fp         " << report.fp << "\n"
      << "  fn         " << report.fn << "\n"
      << "  precision  " << report.precision << "\n"
      << "  recall     " << report.recall << "\n"
      << "  f1         " << report.f1 << "\n"
      << "  threshold  " << report.threshold << "\n"
      << "  iou        " << report.iou_threshold << "\n";
  return out.str();
}

std::string trace_to_json_line(const std::string& subject, const AugmentationTrace& trace) {
  auto op_to_json = [](const AugmentationTrace::ColorOp& op) {
    json out{{"active", op.active}};
    if (op.active) out["value"] = op.value;
    return out;
  };
  return json{{"subject", subject},
              {"brightness", op_to_json(trace.brightness)},
              {"hue", op_to_json(trace.hue)},
              {"contrast", op_to_json(trace.contrast)},
              {"saturation", op_to_json(trace.saturation)},
              {"flip_horizontal", trace.flip_horizontal},
              {"flip_vertical", trace.flip_vertical}}
      .dump();
}

std::string pr_curve_to_csv(const std::vector<PrPoint>& points) {
  auto fmt = [](double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  };
  std::string out = "tau,precision,recall,f1\n";
  for (const PrPoint& p : points) {
    out += fmt(p.tau) + "," + fmt(p.precision) + "," + fmt(p.recall) + "," + fmt(p.f1) + "\n";
  }
  return out;
}

}  // namespace mitodet
