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

#include "mitodet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mitodet/error.hpp"

namespace mitodet {

std::string_view to_string(Label label) {
  switch (label) {
    case Label::Mitotic:
      return "mitotic";
    case Label::NonMitotic:
      return "non_mitotic";
  }
  throw ValidationError("to_string: unknown label value");
}

Label label_from_string(std::string_view text) {
  if (text == "mitotic") return Label::Mitotic;
  if (text == "non_mitotic") return Label::NonMitotic;
  throw ParseError("unknown label '" + std::string(text) + "' (expected 'mitotic' or 'non_mitotic')");
}

void validate_slide(const SlideRecord& slide) {
  if (slide.slide_id.empty()) throw ValidationError("slide with empty slide_id");
  if (slide.width < 1 || slide.height < 1) {
    throw ValidationError("slide '" + slide.slide_id + "': dimensions must be >= 1");
  }
  for (const Annotation& ann : slide.annotations) {
    if (!box_in_frame(ann.box, slide.width, slide.height)) {
      throw ValidationError("slide '" + slide.slide_id + "': annotation outside slide bounds");
    }
  }
}

void validate_canonical_boxes(const std::vector<SlideRecord>& slides, double box_size) {
  for (const SlideRecord& slide : slides) {
    for (const Annotation& ann : slide.annotations) {
      if (ann.box.w() != box_size || ann.box.h() != box_size) {
        throw ValidationError("slide '" + slide.slide_id + "': annotation is not the canonical " +
                              std::to_string(box_size) + "px square");
      }
    }
  }
}

namespace {

std::vector<std::string> sorted_slide_ids(const std::vector<SlideRecord>& slides) {
  std::vector<std::string> ids;
  ids.reserve(slides.size());
  for (const SlideRecord& s : slides) ids.push_back(s.slide_id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw ValidationError("duplicate slide_id in slide set");
  }
  return ids;
}

// Fisher-Yates with our own unbiased index draws; std::shuffle is not
// byte-stable across standard libraries.
void deterministic_shuffle(std::vector<std::string>& ids, RandomStream& rng) {
  for (std::size_t i = ids.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform_index(i));
    std::swap(ids[i - 1], ids[j]);
  }
}

}  // namespace

SplitPlan split_random(const std::vector<SlideRecord>& slides, std::size_t n_train,
                       std::size_t n_val, std::size_t n_test, std::uint64_t seed) {
  const std::size_t total = n_train + n_val + n_test;
  if (total != slides.size()) {
    throw ValidationError("split_random: counts sum to " + std::to_string(total) +
                          " but the slide set has " + std::to_string(slides.size()) + " slides");
  }
  std::vector<std::string> ids = sorted_slide_ids(slides);
  RandomStream rng = StreamKey(seed).with("split_random").stream();
  deterministic_shuffle(ids, rng);

  SplitPlan plan;
  plan.seed = seed;
  plan.train.assign(ids.begin(), ids.begin() + n_train);
  plan.validation.assign(ids.begin() + n_train, ids.begin() + n_train + n_val);
  plan.test.assign(ids.begin() + n_train + n_val, ids.end());
  std::sort(plan.train.begin(), plan.train.end());
  std::sort(plan.validation.begin(), plan.validation.end());
  std::sort(plan.test.begin(), plan.test.end());
  return plan;
}

std::vector<SplitPlan> split_leave_one_scanner_out(const std::vector<SlideRecord>& slides) {
  std::map<std::string, std::vector<std::string>> by_scanner;
  for (const SlideRecord& s : slides) by_scanner[s.scanner_id].push_back(s.slide_id);
  if (by_scanner.size() < 2) {
    throw ValidationError("split_leave_one_scanner_out: needs at least 2 distinct scanners, got " +
                          std::to_string(by_scanner.size()));
  }

  std::vector<SplitPlan> folds;
  folds.reserve(by_scanner.size());
  for (const auto& [scanner, _] : by_scanner) {
    SplitPlan plan;
    for (const SlideRecord& s : slides) {
      (s.scanner_id == scanner ? plan.test : plan.train).push_back(s.slide_id);
    }
    std::sort(plan.train.begin(), plan.train.end());
    std::sort(plan.test.begin(), plan.test.end());
    folds.push_back(std::move(plan));
  }
  return folds;
}

std::vector<Tile> tile_slide(const SlideRecord& slide, int tile_size, bool center_rule,
                             const RgbImage* slide_pixels) {
  if (tile_size < 1) throw ValidationError("tile_slide: tile_size must be >= 1");
  validate_slide(slide);
  if (slide_pixels &&
      (slide_pixels->width != slide.width || slide_pixels->height != slide.height)) {
    throw ValidationError("tile_slide: pixel buffer does not match slide dimensions");
  }

  const int nx = (slide.width + tile_size - 1) / tile_size;
  const int ny = (slide.height + tile_size - 1) / tile_size;

  std::vector<Tile> tiles;
  tiles.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      Tile tile;
      tile.slide_id = slide.slide_id;
      tile.origin_x = i * tile_size;
      tile.origin_y = j * tile_size;
      tile.size = tile_size;
      if (slide_pixels) tile.pixels = crop_padded(*slide_pixels, tile.origin_x, tile.origin_y, tile_size);
      tiles.push_back(std::move(tile));
    }
  }

  auto clipped_into = [&](const Annotation& ann, int ti, int tj) -> std::optional<Annotation> {
    const Box local = translate_box(ann.box, -ti * tile_size, -tj * tile_size);
    const std::optional<Box> clipped = clip_box(local, tile_size, tile_size);
    if (!clipped) return std::nullopt;
    Annotation out = ann;
    out.box = *clipped;
    out.truncated = ann.truncated || clipped->area() < 0.25 * ann.box.area();
    return out;
  };

  for (const Annotation& ann : slide.annotations) {
    if (center_rule) {
      // Centers exactly on a boundary land in the tile with the larger
      // origin; floor() of the grid coordinate does exactly that.
      const int ti = std::min(static_cast<int>(std::floor(ann.box.center_x() / tile_size)), nx - 1);
      const int tj = std::min(static_cast<int>(std::floor(ann.box.center_y() / tile_size)), ny - 1);
      if (std::optional<Annotation> placed = clipped_into(ann, ti, tj)) {
        tiles[static_cast<std::size_t>(tj) * nx + ti].annotations.push_back(*placed);
      }
    } else {
      for (int tj = 0; tj < ny; ++tj) {
        for (int ti = 0; ti < nx; ++ti) {
          if (std::optional<Annotation> placed = clipped_into(ann, ti, tj)) {
            tiles[static_cast<std::size_t>(tj) * nx + ti].annotations.push_back(*placed);
          }
        }
      }
    }
  }
  return tiles;
}

std::vector<Tile> sample_training_tiles(const std::vector<Tile>& tiles, double drop_prob,
                                        RandomStream& rng) {
  if (!(drop_prob >= 0.0 && drop_prob <= 1.0)) {
    throw ValidationError("sample_training_tiles: drop_prob must be in [0,1]");
  }
  std::vector<Tile> kept;
  for (const Tile& tile : tiles) {
    if (!tile.annotations.empty()) {
      kept.push_back(tile);
      continue;
    }
    if (rng.uniform() >= drop_prob) kept.push_back(tile);
  }
  return kept;
}

}  // namespace mitodet
