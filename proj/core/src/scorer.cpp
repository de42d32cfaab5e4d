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

#include "mitodet/scorer.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mitodet/error.hpp"
#include "mitodet/formats.hpp"

namespace mitodet {

void validate_scorer_config(const ScorerConfig& config) {
  if (!(config.recall_sim >= 0.0 && config.recall_sim <= 1.0)) {
    throw ValidationError("scorer config: recall_sim must be in [0,1]");
  }
  if (!(config.fp_rate >= 0.0)) throw ValidationError("scorer config: fp_rate must be >= 0");
  if (!(config.jitter >= 0.0)) throw ValidationError("scorer config: jitter must be >= 0");
  auto check_range = [](const ScoreRange& r, const char* name) {
    if (!(r.lo >= 0.0 && r.hi <= 1.0 && r.lo <= r.hi)) {
      throw ValidationError(std::string("scorer config: ") + name + " support must be within [0,1]");
    }
  };
  check_range(config.tp_scores, "tp_scores");
  check_range(config.fp_scores, "fp_scores");
  if (!(config.fp_box_size > 0.0)) throw ValidationError("scorer config: fp_box_size must be > 0");
}

OracleScorer::OracleScorer(ScorerConfig config) : config_(std::move(config)) {
  validate_scorer_config(config_);
}

namespace {

// Inclusive-upper uniform draw for score supports: a degenerate [1,1]
// range must actually emit 1.0.
double draw_score(const ScoreRange& r, RandomStream& rng) {
  return r.lo == r.hi ? r.lo : rng.uniform(r.lo, r.hi);
}

}  // namespace

std::vector<Detection> OracleScorer::score_tile(const Tile& tile, RandomStream& rng) const {
  std::vector<Detection> detections;
  for (const Annotation& ann : tile.annotations) {
    if (ann.label != Label::Mitotic) continue;
    if (!rng.bernoulli(config_.recall_sim)) continue;
    double dx = 0.0, dy = 0.0;
    if (config_.jitter > 0.0) {
      dx = rng.uniform(-config_.jitter, config_.jitter);
      dy = rng.uniform(-config_.jitter, config_.jitter);
    } else {
      rng.uniform();  // keep the draw count fixed regardless of jitter
      rng.uniform();
    }
    const double score = draw_score(config_.tp_scores, rng);
    detections.push_back({translate_box(ann.box, dx, dy), score, Label::Mitotic, Frame::Tile});
  }

  const int spurious = rng.poisson(config_.fp_rate);
  const double size = std::min(config_.fp_box_size, static_cast<double>(tile.size));
  for (int i = 0; i < spurious; ++i) {
    const double x = rng.uniform(0.0, tile.size - size);
    const double y = rng.uniform(0.0, tile.size - size);
    const double score = draw_score(config_.fp_scores, rng);
    detections.push_back({Box(x, y, size, size), score, Label::Mitotic, Frame::Tile});
  }
  return detections;
}

namespace {

constexpr char kHeader[] = "slide_id,x,y,w,h,score,label";

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);  // shortest round-trip form
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& field, const char* name, std::size_t line_no,
                    const std::string& origin) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw ParseError(origin + ":" + std::to_string(line_no) + ": field '" + name +
                     "' is not a number: '" + field + "'");
  }
  return value;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

}  // namespace

PredictionSet load_predictions(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(origin + ": empty file, expected header '" + kHeader + "'");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) {
    throw ParseError(origin + ":1: bad header, expected '" + std::string(kHeader) + "'");
  }

  PredictionSet predictions;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != 7) {
      throw ParseError(origin + ":" + std::to_string(line_no) + ": expected 7 fields, got " +
                       std::to_string(fields.size()));
    }
    const std::string& slide_id = fields[0];
    if (slide_id.empty()) {
      throw ParseError(origin + ":" + std::to_string(line_no) + ": field 'slide_id' is empty");
    }
    const double x = parse_double(fields[1], "x", line_no, origin);
    const double y = parse_double(fields[2], "y", line_no, origin);
    const double w = parse_double(fields[3], "w", line_no, origin);
    const double h = parse_double(fields[4], "h", line_no, origin);
    const double score = parse_double(fields[5], "score", line_no, origin);

    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(w) || !std::isfinite(h) ||
        w <= 0.0 || h <= 0.0) {
      throw ValidationError(origin + ":" + std::to_string(line_no) +
                            ": box must be finite with positive size");
    }
    if (!(score >= 0.0 && score <= 1.0)) {
      throw ValidationError(origin + ":" + std::to_string(line_no) + ": score " +
                            fields[5] + " outside [0,1]");
    }
    Label label = Label::Mitotic;
    try {
      label = label_from_string(fields[6]);
    } catch (const ParseError& e) {
      throw ParseError(origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
    predictions[slide_id].push_back({Box(x, y, w, h), score, label, Frame::Slide});
  }
  return predictions;
}

PredictionSet load_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open predictions file: " + path.string());
  return load_predictions(in, path.string());
}

void save_predictions(std::ostream& out, const PredictionSet& predictions) {
  out << kHeader << '\n';
  for (const auto& [slide_id, detections] : predictions) {
    if (slide_id.find_first_of(",\r\n") != std::string::npos) {
      throw ValidationError("save_predictions: slide_id '" + slide_id +
                            "' contains a delimiter character");
    }
    for (const Detection& d : detections) {
      out << slide_id << ',' << format_double(d.box.x()) << ',' << format_double(d.box.y()) << ','
          << format_double(d.box.w()) << ',' << format_double(d.box.h()) << ','
          << format_double(d.score) << ',' << to_string(d.label) << '\n';
    }
  }
}

void save_predictions(const std::filesystem::path& path, const PredictionSet& predictions) {
  std::ostringstream buffer;
  save_predictions(buffer, predictions);
  atomic_write_text(path, buffer.str());
}

}  // namespace mitodet
