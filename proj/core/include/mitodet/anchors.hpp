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
#include <vector>

#include "mitodet/dataset.hpp"
#include "mitodet/geometry.hpp"
#include "mitodet/rng.hpp"

namespace mitodet {

/// Square anchors on a regular grid over one feature level. All anchors
/// share the single 50-px scale and aspect ratio 1; multi-level setups
/// are modeled as one grid per stride carrying the same scale.
struct AnchorGrid {
  int tile_size = 0;
  int stride = 0;
  double scale = 50.0;
  int cells_x = 0;
  int cells_y = 0;
  // Row-major (y outer), centered at ((i+0.5)*stride, (j+0.5)*stride);
  // anchors near the border may extend past the tile and are kept
  // unclipped here — border handling belongs to the matcher.
  std::vector<Box> anchors;
};

enum class AnchorLabel : std::uint8_t { Negative, Positive, Ignore };

/// Matching state the minibatch sampler consumes. matched_gt holds the
/// index of the ground-truth box a Positive anchor is assigned to
/// (its highest-IoU gt, ties to the lowest index), -1 elsewhere.
struct AnchorLabels {
  std::vector<AnchorLabel> labels;
  std::vector<std::int32_t> matched_gt;

  std::size_t count(AnchorLabel label) const;
};

/// One scale-sized square anchor per feature cell; cells_x = cells_y =
/// ceil(tile_size / stride).
AnchorGrid generate_anchors(int tile_size, int stride, double scale = 50.0);

/// Labels each anchor against the ground truth:
///   - Positive when its best IoU >= pos_iou, Negative when < neg_iou,
///     Ignore in between;
///   - anchors with more than half their area outside the tile are
///     forced Ignore;
///   - finally, each gt's highest-IoU anchor (ties to the lowest anchor
///     index) is forced Positive — applied last so a gt near the border
///     always keeps its best match. Forcing is skipped for a gt whose
///     best IoU is 0, which cannot happen while stride <= scale.
/// An empty gt list short-circuits to all-Negative.
/// Defaults are the canonical two-stage-detector thresholds; requires
/// pos_iou > neg_iou.
AnchorLabels match_anchors(const AnchorGrid& grid, const std::vector<Annotation>& gt,
                           double pos_iou = 0.7, double neg_iou = 0.3);

struct SampledAnchor {
  std::size_t index;
  AnchorLabel label;
};

/// Draws the training minibatch: n_pos = min(#Positive,
/// round(batch_size * positive_fraction)) positives uniformly without
/// replacement, then batch_size - n_pos negatives (fewer if exhausted).
/// Ignore anchors are never selected. Positives precede negatives in
/// the result; an all-empty label set yields an empty batch (degenerate
/// tile).
std::vector<SampledAnchor> sample_minibatch(const AnchorLabels& labels, std::size_t batch_size,
                                            double positive_fraction, RandomStream& rng);

}  // namespace mitodet
