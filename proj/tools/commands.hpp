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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mitodet/config.hpp"
#include "mitodet/scorer.hpp"

namespace mitodet::cli {

/// Options shared by every subcommand: config file (flag or
/// MITODET_CONFIG) plus an optional seed override.
struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;

  /// Loads the config (or defaults) and applies the seed override.
  PipelineConfig resolve() const;
};

struct SplitOptions {
  std::string manifest;
  std::string out;
  bool leave_one_scanner_out = false;
  std::int64_t n_train = -1;
  std::int64_t n_val = -1;
  std::int64_t n_test = -1;
};
void run_split(const GlobalOptions& global, const SplitOptions& opt);

struct TileOptions {
  std::string manifest;
  std::string out_dir;
  int tile_size = 0;  // 0 = config value
  bool overlap_mode = false;
  bool sample_empty = false;
};
void run_tile(const GlobalOptions& global, const TileOptions& opt);

struct AugmentOptions {
  std::string tiles_manifest;
  std::string out_dir;
  std::uint64_t epoch = 0;
};
void run_augment(const GlobalOptions& global, const AugmentOptions& opt);

struct AnchorsOptions {
  std::string out;
  int tile_size = 0;   // 0 = config value
  int stride = 0;      // 0 = dump every configured level
  std::string tiles_manifest;  // optional gt source
  std::string slide_id;
  int origin_x = 0;
  int origin_y = 0;
  bool sample_batch = false;
};
void run_anchors(const GlobalOptions& global, const AnchorsOptions& opt);

struct ScoreOptions {
  std::string manifest;
  std::string out;
  std::string passthrough;  // validate/normalize an existing table instead
  ScorerConfig oracle;      // populated from flags
};
void run_score(const GlobalOptions& global, const ScoreOptions& opt);

struct PostprocessOptions {
  std::string in;
  std::string out;
  double tau = 0.0;
  double nms_iou = -1.0;  // <0 = config value
};
void run_postprocess(const GlobalOptions& global, const PostprocessOptions& opt);

struct EvaluateOptionsCli {
  std::string predictions;
  std::string manifest;
  std::string out;
  double tau = 0.0;
};
void run_evaluate(const GlobalOptions& global, const EvaluateOptionsCli& opt);

struct TuneOptions {
  std::string predictions;
  std::string manifest;
  std::string out;
  std::string pr_curve_out;
  bool skip_nms = false;
};
void run_tune(const GlobalOptions& global, const TuneOptions& opt);

struct DemoOptions {
  std::string out_dir;
  int n_slides = 10;
  double oracle_recall = 1.0;
  double oracle_fp_rate = 0.0;
  double oracle_jitter = 0.0;
};
void run_demo(const GlobalOptions& global, const DemoOptions& opt);

}  // namespace mitodet::cli
