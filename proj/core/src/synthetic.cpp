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

#include "mitodet/synthetic.hpp"

#include <cmath>

#include "mitodet/error.hpp"
#include "mitodet/geometry.hpp"
#include "mitodet/rng.hpp"

namespace mitodet {

namespace {

// Draws a box position that respects the separation and grid
// constraints; bails out after a bounded number of tries so a
// badly-parameterized config fails loudly instead of spinning.
Box place_box(const SyntheticDatasetConfig& config, int slide_w, int slide_h,
              const std::vector<Box>& taken, RandomStream& rng) {
  const double size = config.box_size;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    double x, y;
    if (config.placement_grid > 0) {
      // Pick a grid cell, then a position fully inside it (and inside
      // the slide).
      const int grid = config.placement_grid;
      const int nx = slide_w / grid;  // cells fully inside the slide
      const int ny = slide_h / grid;
      if (nx < 1 || ny < 1 || size > grid) {
        throw ValidationError("generate_slides: placement grid does not fit the slide");
      }
      const int ci = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(nx)));
      const int cj = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(ny)));
      x = ci * grid + rng.uniform(0.0, grid - size);
      y = cj * grid + rng.uniform(0.0, grid - size);
    } else {
      x = rng.uniform(0.0, slide_w - size);
      y = rng.uniform(0.0, slide_h - size);
    }
    Box candidate(x, y, size, size);
    bool clear = true;
    for (const Box& other : taken) {
      if (iou(candidate, other) >= config.min_separation_iou) {
        clear = false;
        break;
      }
    }
    if (clear) return candidate;
  }
  throw ValidationError("generate_slides: could not place a box after 1000 attempts");
}

}  // namespace

std::vector<SlideRecord> generate_slides(const SyntheticDatasetConfig& config) {
  if (config.n_slides < 1) throw ValidationError("generate_slides: n_slides must be >= 1");
  if (config.min_dim > config.max_dim) throw ValidationError("generate_slides: dim range not ordered");
  if (config.scanners.empty()) throw ValidationError("generate_slides: scanner list is empty");
  if (config.box_size <= 0.0) throw ValidationError("generate_slides: box_size must be > 0");

  std::vector<SlideRecord> slides;
  slides.reserve(config.n_slides);
  for (int s = 0; s < config.n_slides; ++s) {
    // Stable zero-padded ids so lexicographic order equals generation
    // order.
    std::string id = std::to_string(s + 1);
    id.insert(0, id.size() >= 3 ? 0 : 3 - id.size(), '0');

    SlideRecord slide;
    slide.slide_id = "slide_" + id;
    slide.scanner_id = config.scanners[s % config.scanners.size()];

    RandomStream rng = StreamKey(config.seed).with("synthetic").with(slide.slide_id).stream();
    const int span = config.max_dim - config.min_dim;
    slide.width = config.min_dim + (span == 0 ? 0 : static_cast<int>(rng.uniform_index(span + 1)));
    slide.height = config.min_dim + (span == 0 ? 0 : static_cast<int>(rng.uniform_index(span + 1)));

    std::vector<Box> mitotic_taken;
    std::vector<Box> lookalike_taken;
    for (int i = 0; i < config.mitotic_per_slide; ++i) {
      const Box box = place_box(config, slide.width, slide.height, mitotic_taken, rng);
      mitotic_taken.push_back(box);
      slide.annotations.push_back({box, Label::Mitotic, false});
    }
    for (int i = 0; i < config.nonmitotic_per_slide; ++i) {
      const Box box = place_box(config, slide.width, slide.height, lookalike_taken, rng);
      lookalike_taken.push_back(box);
      slide.annotations.push_back({box, Label::NonMitotic, false});
    }
    slides.push_back(std::move(slide));
  }
  return slides;
}

RgbImage generate_test_pattern(int width, int height, std::uint64_t seed) {
  RgbImage img = RgbImage::zeros(width, height);
  // Smooth gradients plus hashed speckle: enough structure to make
  // color ops visible, fully deterministic.
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::uint64_t mixed = StreamKey::mix(seed ^ (static_cast<std::uint64_t>(y) << 32 | x));
      img.at(x, y, 0) = static_cast<std::uint8_t>((x * 255) / std::max(1, width - 1));
      img.at(x, y, 1) = static_cast<std::uint8_t>((y * 255) / std::max(1, height - 1));
      img.at(x, y, 2) = static_cast<std::uint8_t>(mixed & 0xff);
    }
  }
  return img;
}

}  // namespace mitodet
