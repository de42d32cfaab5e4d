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

#include <filesystem>
#include <iosfwd>
#include <memory>

#include "mitodet/dataset.hpp"
#include "mitodet/evaluation.hpp"
#include "mitodet/postprocess.hpp"
#include "mitodet/rng.hpp"

namespace mitodet {

/// Anything that turns a tile into scored detections. Two built-ins
/// ship with the library — the synthetic oracle below and the CSV
/// loader — and a trained model slots in later as a third
/// implementation without touching pipeline code.
class Scorer {
 public:
  virtual ~Scorer() = default;

  /// Detections in tile coordinates. Implementations must be pure given
  /// the stream, so tiles can be scored in parallel with split streams.
  virtual std::vector<Detection> score_tile(const Tile& tile, RandomStream& rng) const = 0;
};

/// Uniform score support [lo, hi].
struct ScoreRange {
  double lo = 0.0;
  double hi = 1.0;
};

/// Knobs of the synthetic oracle. recall_sim is the probability a
/// mitotic gt box is emitted; fp_rate the expected count of spurious
/// detections per tile; jitter the maximum per-axis center displacement
/// in pixels (uniform, so the worst-case IoU against the true box is
/// analytically boundable). Defaults are the zero-noise identity except
/// for the score supports.
struct ScorerConfig {
  double recall_sim = 1.0;
  double fp_rate = 0.0;
  double jitter = 0.0;
  ScoreRange tp_scores{0.6, 1.0};
  ScoreRange fp_scores{0.0, 0.7};
  double fp_box_size = 50.0;
  std::uint64_t seed = 0;
};

void validate_scorer_config(const ScorerConfig& config);

/// Stand-in for the trained network: perturbs ground truth into
/// detections with controllable recall, false-positive rate and score
/// distributions, which makes every downstream stage testable without
/// training anything.
///
/// Draw order per tile (pinned for reproducibility): for each mitotic
/// annotation in order — one emission draw, then when emitted two
/// jitter draws (x, y) and one score draw; afterwards one Poisson draw
/// for the spurious count, then per spurious detection two position
/// draws and one score draw.
class OracleScorer : public Scorer {
 public:
  explicit OracleScorer(ScorerConfig config);

  std::vector<Detection> score_tile(const Tile& tile, RandomStream& rng) const override;

  const ScorerConfig& config() const { return config_; }

 private:
  ScorerConfig config_;
};

// Detection interchange format: delimited text, one detection per row
//   slide_id,x,y,w,h,score,label
// with the header row mandatory and numbers serialized with full
// round-trip precision. Boxes are in slide coordinates.

/// Parses and validates a detection table. Malformed rows raise
/// ParseError with line and field; out-of-range scores or non-finite
/// boxes raise ValidationError naming the line.
PredictionSet load_predictions(const std::filesystem::path& path);
PredictionSet load_predictions(std::istream& in, const std::string& origin);

void save_predictions(const std::filesystem::path& path, const PredictionSet& predictions);
void save_predictions(std::ostream& out, const PredictionSet& predictions);

}  // namespace mitodet
