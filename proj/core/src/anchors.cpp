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

#include "mitodet/anchors.hpp"

#include <algorithm>
#include <cmath>

#include "mitodet/error.hpp"

namespace mitodet {

std::size_t AnchorLabels::count(AnchorLabel label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

AnchorGrid generate_anchors(int tile_size, int stride, double scale) {
  if (stride < 1) throw ValidationError("generate_anchors: stride must be >= 1");
  if (scale < 1.0) throw ValidationError("generate_anchors: scale must be >= 1");
  if (tile_size < stride) throw ValidationError("generate_anchors: tile_size must be >= stride");

  AnchorGrid grid;
  grid.tile_size = tile_size;
  grid.stride = stride;
  grid.scale = scale;
  grid.cells_x = (tile_size + stride - 1) / stride;
  grid.cells_y = grid.cells_x;  // square tiles
  grid.anchors.reserve(static_cast<std::size_t>(grid.cells_x) * grid.cells_y);
  const double half = scale / 2.0;
  for (int j = 0; j < grid.cells_y; ++j) {
    for (int i = 0; i < grid.cells_x; ++i) {
      const double cx = (i + 0.5) * stride;
      const double cy = (j + 0.5) * stride;
      grid.anchors.emplace_back(cx - half, cy - half, scale, scale);
    }
  }
  return grid;
}

AnchorLabels match_anchors(const AnchorGrid& grid, const std::vector<Annotation>& gt,
                           double pos_iou, double neg_iou) {
  if (!(pos_iou > neg_iou)) throw ValidationError("match_anchors: pos_iou must exceed neg_iou");

  const std::size_t n = grid.anchors.size();
  AnchorLabels out;
  out.labels.assign(n, AnchorLabel::Negative);
  out.matched_gt.assign(n, -1);
  if (gt.empty()) return out;

  std::vector<double> best_iou(n, 0.0);
  std::vector<std::int32_t> argmax_gt(n, -1);
  std::vector<double> gt_best_iou(gt.size(), 0.0);
  std::vector<std::size_t> gt_best_anchor(gt.size(), 0);

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t g = 0; g < gt.size(); ++g) {
      const double v = iou(grid.anchors[a], gt[g].box);
      if (v > best_iou[a]) {
        best_iou[a] = v;
        argmax_gt[a] = static_cast<std::int32_t>(g);  // strict > keeps the lowest gt index on ties
      }
      if (v > gt_best_iou[g]) {
        gt_best_iou[g] = v;
        gt_best_anchor[g] = a;  // strict > keeps the lowest anchor index on ties
      }
    }
  }

  for (std::size_t a = 0; a < n; ++a) {
    if (best_iou[a] >= pos_iou) {
      out.labels[a] = AnchorLabel::Positive;
    } else if (best_iou[a] < neg_iou) {
      out.labels[a] = AnchorLabel::Negative;
    } else {
      out.labels[a] = AnchorLabel::Ignore;
    }
  }

  // Mostly-outside anchors carry too little tile content to train on.
  for (std::size_t a = 0; a < n; ++a) {
    const Box& anchor = grid.anchors[a];
    const std::optional<Box> inside = clip_box(anchor, grid.tile_size, grid.tile_size);
    const double inside_area = inside ? inside->area() : 0.0;
    if (inside_area < 0.5 * anchor.area()) out.labels[a] = AnchorLabel::Ignore;
  }

  // Forced best-match, applied last so it wins over the border rule.
  for (std::size_t g = 0; g < gt.size(); ++g) {
    if (gt_best_iou[g] <= 0.0) continue;
    out.labels[gt_best_anchor[g]] = AnchorLabel::Positive;
  }

  for (std::size_t a = 0; a < n; ++a) {
    if (out.labels[a] == AnchorLabel::Positive) out.matched_gt[a] = argmax_gt[a];
  }
  return out;
}

std::vector<SampledAnchor> sample_minibatch(const AnchorLabels& labels, std::size_t batch_size,
                                            double positive_fraction, RandomStream& rng) {
  if (!(positive_fraction > 0.0 && positive_fraction <= 1.0)) {
    throw ValidationError("sample_minibatch: positive_fraction must be in (0,1]");
  }
  if (batch_size == 0) throw ValidationError("sample_minibatch: batch_size must be >= 1");

  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    if (labels.labels[i] == AnchorLabel::Positive) positives.push_back(i);
    if (labels.labels[i] == AnchorLabel::Negative) negatives.push_back(i);
  }
  if (positives.empty() && negatives.empty()) return {};

  auto take = [&rng](std::vector<std::size_t>& pool, std::size_t n) {
    // Partial Fisher-Yates: the first n entries end up being a uniform
    // sample without replacement.
    n = std::min(n, pool.size());
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(n);
    return pool;
  };

  const auto pos_quota = static_cast<std::size_t>(std::llround(batch_size * positive_fraction));
  const std::vector<std::size_t> chosen_pos = take(positives, std::min(pos_quota, positives.size()));
  const std::vector<std::size_t> chosen_neg = take(negatives, batch_size - chosen_pos.size());

  std::vector<SampledAnchor> batch;
  batch.reserve(chosen_pos.size() + chosen_neg.size());
  for (std::size_t i : chosen_pos) batch.push_back({i, AnchorLabel::Positive});
  for (std::size_t i : chosen_neg) batch.push_back({i, AnchorLabel::Negative});
  return batch;
}

}  // namespace mitodet
