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
#include <string_view>
#include <vector>

#include "mitodet/geometry.hpp"
#include "mitodet/image.hpp"
#include "mitodet/rng.hpp"

namespace mitodet {

/// Object classes. Lookalikes (cells resembling a dividing cell but not
/// dividing) are kept as a second training class and excluded from
/// evaluation.
enum class Label : std::uint8_t { Mitotic, NonMitotic };

std::string_view to_string(Label label);
Label label_from_string(std::string_view text);

/// Ground-truth box with its class. In canonical slide coordinates the
/// box is box_size x box_size (default 50); tiling may clip it smaller.
/// `truncated` is set when clipping removed more than 75% of the
/// original area, so downstream consumers can filter slivers without
/// the tiler silently dropping annotations.
struct Annotation {
  Box box;
  Label label = Label::Mitotic;
  bool truncated = false;

  bool operator==(const Annotation&) const = default;
};

/// One whole slide: identity, scanner, dimensions and annotations.
/// `image_source` is an optional path; metadata-only records are valid
/// for splitting and tile-count work.
struct SlideRecord {
  std::string slide_id;
  std::string scanner_id;
  int width = 0;
  int height = 0;
  std::vector<Annotation> annotations;
  std::string image_source;  // empty = metadata-only
};

/// Throws ValidationError unless dimensions are >= 1 and every
/// annotation lies inside [0,width] x [0,height].
void validate_slide(const SlideRecord& slide);

/// Throws ValidationError unless every annotation box in every slide is
/// exactly box_size x box_size (the canonical un-clipped size).
void validate_canonical_boxes(const std::vector<SlideRecord>& slides, double box_size);

/// A 1024-px (by default) square crop of a slide. Annotation boxes are
/// in tile coordinates, clipped to the tile. `pixels` is absent in
/// metadata-only workflows.
struct Tile {
  std::string slide_id;
  int origin_x = 0;
  int origin_y = 0;
  int size = 1024;
  std::vector<Annotation> annotations;
  std::optional<RgbImage> pixels;
};

/// Disjoint train/validation/test slide-id lists covering the input
/// slide set. Lists are sorted; the plan is a pure function of the
/// slide-id set and the seed.
struct SplitPlan {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
  std::uint64_t seed = 0;

  bool operator==(const SplitPlan&) const = default;
};

/// Uniformly random partition into |train|=n_train, |validation|=n_val,
/// |test|=n_test. The counts must sum to the number of slides
/// (ValidationError naming expected vs actual otherwise). Slide ids are
/// sorted before the seeded shuffle, so manifest order never leaks into
/// the plan.
SplitPlan split_random(const std::vector<SlideRecord>& slides, std::size_t n_train,
                       std::size_t n_val, std::size_t n_test, std::uint64_t seed);

/// One fold per distinct scanner, ordered by scanner id: that scanner's
/// slides form the test set, everything else trains, validation stays
/// empty. Throws ValidationError when fewer than two scanners are
/// present.
std::vector<SplitPlan> split_leave_one_scanner_out(const std::vector<SlideRecord>& slides);

/// Cuts the slide into a non-overlapping grid of tile_size x tile_size
/// tiles (stride = tile_size), ceil(width/tile_size) *
/// ceil(height/tile_size) of them; edge tiles are zero-padded in pixel
/// space while annotation clipping uses the true slide extent.
///
/// With center_rule (the default), each annotation goes to the single
/// tile containing its center — a center exactly on a tile boundary
/// belongs to the tile with the larger origin — then is clipped and
/// translated into tile coordinates, so every annotation appears
/// exactly once. With center_rule = false, the annotation is instead
/// copied (clipped) into every tile it overlaps.
///
/// When slide_pixels is given it must match the slide dimensions; each
/// tile then carries its pixel crop.
std::vector<Tile> tile_slide(const SlideRecord& slide, int tile_size = 1024,
                             bool center_rule = true, const RgbImage* slide_pixels = nullptr);

/// Rejection sampling of empty training tiles: tiles with at least one
/// annotation are always kept, each empty tile survives iff its uniform
/// draw in [0,1) is >= drop_prob. Order is preserved and the result is
/// fully determined by the stream's seed; callers wanting a fresh draw
/// per epoch pass a per-epoch stream.
std::vector<Tile> sample_training_tiles(const std::vector<Tile>& tiles, double drop_prob,
                                        RandomStream& rng);

}  // namespace mitodet
