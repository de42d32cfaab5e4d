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
#include <string>
#include <vector>

#include "mitodet/dataset.hpp"
#include "mitodet/image.hpp"

namespace mitodet {

/// Synthetic dataset layout. The real slide corpus is not
/// redistributable, so demos and tests run on generated metadata that
/// matches its shape: slide dims uniform in [min_dim, max_dim],
/// box_size-square annotations of both classes, a scanner id cycling
/// through `scanners`.
struct SyntheticDatasetConfig {
  int n_slides = 10;
  int min_dim = 5000;
  int max_dim = 7000;
  int mitotic_per_slide = 8;
  int nonmitotic_per_slide = 4;
  double box_size = 50.0;
  /// Annotations are placed so that no two same-class boxes on a slide
  /// overlap with IoU >= min_separation_iou, and (when placement_grid >
  /// 0) so that no box straddles a placement_grid line. Both keep a
  /// zero-noise oracle an exact identity end to end: overlapping truths
  /// would suppress each other in per-class NMS, and a straddling box
  /// would reach the scorer clipped.
  double min_separation_iou = 0.05;
  int placement_grid = 1024;
  std::vector<std::string> scanners{"scanner_a", "scanner_b", "scanner_c"};
  std::uint64_t seed = 0;
};

std::vector<SlideRecord> generate_slides(const SyntheticDatasetConfig& config);

/// Deterministic colorful test pattern for image-path demos and tests.
RgbImage generate_test_pattern(int width, int height, std::uint64_t seed);

}  // namespace mitodet
