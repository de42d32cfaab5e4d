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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "mitodet/anchors.hpp"
#include "mitodet/error.hpp"

using namespace mitodet;

namespace {

std::vector<Annotation> gt_boxes(std::initializer_list<Box> boxes) {
  std::vector<Annotation> out;
  for (const Box& b : boxes) out.push_back({b, Label::Mitotic, false});
  return out;
}

}  // namespace

TEST_CASE("grid generation: counts, squareness, centers") {
  const AnchorGrid grid = generate_anchors(1024, 16, 50);
  CHECK(grid.anchors.size() == 4096);  // 64 * 64
  for (const Box& a : grid.anchors) {
    CHECK(a.w() == 50.0);
    CHECK(a.h() == 50.0);
  }
  // First anchor centered at (8, 8), last at (1016, 1016).
  CHECK(grid.anchors.front() == Box(8 - 25, 8 - 25, 50, 50));
  CHECK(grid.anchors.back() == Box(1016 - 25, 1016 - 25, 50, 50));

  const AnchorGrid single = generate_anchors(1024, 1024, 50);
  REQUIRE(single.anchors.size() == 1);
  CHECK(single.anchors[0] == Box(487, 487, 50, 50));

  // Non-dividing stride uses the ceiling.
  CHECK(generate_anchors(1000, 300, 50).anchors.size() == 16);

  CHECK_THROWS_AS(generate_anchors(8, 16, 50), ValidationError);
  CHECK_THROWS_AS(generate_anchors(1024, 0, 50), ValidationError);
}

TEST_CASE("anchor count formula holds when the stride divides the tile") {
  RandomStream rng(62);
  for (int trial = 0; trial < 50; ++trial) {
    const int stride = 1 + static_cast<int>(rng.uniform_index(64));
    const int cells = 1 + static_cast<int>(rng.uniform_index(32));
    const AnchorGrid grid = generate_anchors(stride * cells, stride, 50);
    CHECK(grid.anchors.size() == static_cast<std::size_t>(cells) * cells);
  }
}

TEST_CASE("matching thresholds: positive, negative, ignore band") {
  // Tile 100, stride 50 -> four 50x50 anchors at (0,0), (50,0), (0,50),
  // (50,50).
  const AnchorGrid grid = generate_anchors(100, 50, 50);
  REQUIRE(grid.anchors.size() == 4);

  SUBCASE("coincident gt box is positive with iou 1") {
    const auto labels = match_anchors(grid, gt_boxes({Box(0, 0, 50, 50)}));
    CHECK(labels.labels[0] == AnchorLabel::Positive);
    CHECK(labels.matched_gt[0] == 0);
    // Everything else is disjoint or weakly overlapping -> negative.
    CHECK(labels.labels[3] == AnchorLabel::Negative);
    CHECK(labels.matched_gt[3] == -1);
  }

  SUBCASE("band anchor that is no gt's best stays ignored") {
    // gt at x=25 overlaps anchors 0 and 1 with iou 1250/3750 = 1/3
    // each: band for both, tie broken to anchor 0 which becomes the
    // forced positive; anchor 1 stays Ignore.
    const auto labels = match_anchors(grid, gt_boxes({Box(25, 0, 50, 50)}));
    CHECK(labels.labels[0] == AnchorLabel::Positive);
    CHECK(labels.labels[1] == AnchorLabel::Ignore);
    CHECK(labels.matched_gt[0] == 0);
  }

  SUBCASE("empty gt short-circuits to all negative") {
    const auto labels = match_anchors(grid, {});
    for (const auto label : labels.labels) CHECK(label == AnchorLabel::Negative);
    for (const auto m : labels.matched_gt) CHECK(m == -1);
  }

  CHECK_THROWS_AS(match_anchors(grid, {}, 0.3, 0.7), ValidationError);
}

TEST_CASE("mostly-outside anchors are forced to ignore") {
  // Tile 64, stride 64 -> one anchor centered at (32, 32); scale 200
  // leaves only 64^2/200^2 ~ 10% of it inside.
  const AnchorGrid grid = generate_anchors(64, 64, 200);
  REQUIRE(grid.anchors.size() == 1);
  const auto labels = match_anchors(grid, gt_boxes({Box(500, 500, 50, 50)}));
  CHECK(labels.labels[0] == AnchorLabel::Ignore);  // not Negative
}

TEST_CASE("corner anchors of a dense grid get ignored but forced matches survive") {
  // Stride 1: the (0,0)-cell anchor keeps only 25.5^2 of its 2500 area
  // inside -> ignored...
  const AnchorGrid grid = generate_anchors(64, 1, 50);
  const auto no_gt_near = match_anchors(grid, gt_boxes({Box(30, 30, 20, 20)}));
  CHECK(no_gt_near.labels[0] == AnchorLabel::Ignore);

  // ...unless a corner gt makes it (or a neighbor) the best match, which
  // must stay positive despite the border rule.
  const auto corner_gt = gt_boxes({Box(0, 0, 4, 4)});
  const auto labels = match_anchors(grid, corner_gt);
  bool corner_has_positive = false;
  for (std::size_t a = 0; a < grid.anchors.size(); ++a) {
    if (labels.labels[a] == AnchorLabel::Positive && labels.matched_gt[a] == 0) {
      corner_has_positive = true;
    }
  }
  CHECK(corner_has_positive);
}

TEST_CASE("every gt acquires a positive anchor on random layouts") {
  RandomStream rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const AnchorGrid grid = generate_anchors(1024, 16, 50);
    std::vector<Annotation> gts;
    const int n_gt = 1 + static_cast<int>(rng.uniform_index(8));
    for (int g = 0; g < n_gt; ++g) {
      const double x = rng.uniform(0.0, 1024.0 - 50.0);
      const double y = rng.uniform(0.0, 1024.0 - 50.0);
      gts.push_back({Box(x, y, 50, 50), Label::Mitotic, false});
    }
    const auto labels = match_anchors(grid, gts);

    for (int g = 0; g < n_gt; ++g) {
      // Independent recomputation of this gt's best anchor.
      double best = 0.0;
      std::size_t best_a = 0;
      for (std::size_t a = 0; a < grid.anchors.size(); ++a) {
        const double v = iou(grid.anchors[a], gts[g].box);
        if (v > best) {
          best = v;
          best_a = a;
        }
      }
      CHECK(labels.labels[best_a] == AnchorLabel::Positive);
    }
  }
}

TEST_CASE("minibatch sampling honors quota arithmetic") {
  AnchorLabels labels;
  const auto fill = [&](std::size_t n_pos, std::size_t n_neg, std::size_t n_ignore) {
    labels.labels.clear();
    labels.labels.insert(labels.labels.end(), n_pos, AnchorLabel::Positive);
    labels.labels.insert(labels.labels.end(), n_neg, AnchorLabel::Negative);
    labels.labels.insert(labels.labels.end(), n_ignore, AnchorLabel::Ignore);
    labels.matched_gt.assign(labels.labels.size(), -1);
  };

  SUBCASE("scarce positives are topped up with negatives") {
    fill(10, 500, 20);
    RandomStream rng(71);
    const auto batch = sample_minibatch(labels, 256, 0.25, rng);
    std::size_t pos = 0, neg = 0;
    for (const SampledAnchor& s : batch) {
      if (s.label == AnchorLabel::Positive) ++pos;
      if (s.label == AnchorLabel::Negative) ++neg;
      CHECK(labels.labels[s.index] == s.label);  // never an Ignore anchor
    }
    CHECK(pos == 10);
    CHECK(neg == 246);
  }

  SUBCASE("abundant positives are capped at round(batch * fraction)") {
    fill(100, 500, 0);
    RandomStream rng(72);
    const auto batch = sample_minibatch(labels, 256, 0.25, rng);
    std::size_t pos = 0;
    for (const SampledAnchor& s : batch) pos += s.label == AnchorLabel::Positive;
    CHECK(pos == 64);
    CHECK(batch.size() == 256);
  }

  SUBCASE("all-positive boundary") {
    fill(10, 500, 0);
    RandomStream rng(73);
    const auto batch = sample_minibatch(labels, 4, 1.0, rng);
    CHECK(batch.size() == 4);
    for (const SampledAnchor& s : batch) CHECK(s.label == AnchorLabel::Positive);
  }

  SUBCASE("sampling without replacement, deterministic") {
    fill(50, 300, 10);
    RandomStream a(74), b(74);
    const auto batch_a = sample_minibatch(labels, 128, 0.25, a);
    const auto batch_b = sample_minibatch(labels, 128, 0.25, b);
    REQUIRE(batch_a.size() == batch_b.size());
    std::set<std::size_t> unique;
    for (std::size_t i = 0; i < batch_a.size(); ++i) {
      CHECK(batch_a[i].index == batch_b[i].index);
      unique.insert(batch_a[i].index);
    }
    CHECK(unique.size() == batch_a.size());
  }

  SUBCASE("degenerate tile yields an empty batch") {
    fill(0, 0, 30);
    RandomStream rng(75);
    CHECK(sample_minibatch(labels, 256, 0.25, rng).empty());
  }

  SUBCASE("parameter validation") {
    fill(1, 1, 0);
    RandomStream rng(76);
    CHECK_THROWS_AS(sample_minibatch(labels, 256, 0.0, rng), ValidationError);
    CHECK_THROWS_AS(sample_minibatch(labels, 0, 0.25, rng), ValidationError);
  }
}
