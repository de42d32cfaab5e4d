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

#include <utility>
#include <vector>

#include "mitodet/geometry.hpp"
#include "mitodet/image.hpp"
#include "mitodet/rng.hpp"

namespace mitodet {

/// RGB image with normalized float intensities in [0,1], row-major,
/// channels interleaved. Every augmentation clamps its output back into
/// [0,1].
struct ImageBuffer {
  int width = 0;
  int height = 0;
  std::vector<float> values;  // size = width * height * 3

  static ImageBuffer zeros(int width, int height);

  float& at(int x, int y, int c) { return values[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
  float at(int x, int y, int c) const { return values[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }

  bool operator==(const ImageBuffer&) const = default;
};

/// 8-bit -> normalized: value / 255.
ImageBuffer to_normalized(const RgbImage& image);
/// Normalized -> 8-bit: round half away from zero, clamped to [0,255].
RgbImage to_rgb8(const ImageBuffer& image);

/// Activation probability plus the uniform parameter range of one
/// color op.
struct ColorOpParams {
  double prob = 0.2;
  double lo = 0.0;
  double hi = 0.0;

  bool operator==(const ColorOpParams&) const = default;
};

/// The stochastic augmentation schedule. Defaults: each color op fires
/// with probability 0.2 and draws its parameter uniformly from
/// brightness +-0.2, hue +-0.1, contrast +-0.2, saturation +-0.2; each
/// flip axis fires with probability 0.5 (so 25% of images keep their
/// orientation).
struct AugmentationPolicy {
  ColorOpParams brightness{0.2, -0.2, 0.2};
  ColorOpParams hue{0.2, -0.1, 0.1};
  ColorOpParams contrast{0.2, -0.2, 0.2};
  ColorOpParams saturation{0.2, -0.2, 0.2};
  double flip_prob_per_axis = 0.5;

  bool operator==(const AugmentationPolicy&) const = default;
};

/// Throws ValidationError unless all probabilities are in [0,1] and all
/// ranges are ordered.
void validate_policy(const AugmentationPolicy& policy);

// Color conversions used by the hue/saturation ops. Hue lives in [0,1)
// and is defined as 0 for achromatic pixels, which makes grays fixed
// points of both ops.
void rgb_to_hsv(double r, double g, double b, double& h, double& s, double& v);
void hsv_to_rgb(double h, double s, double v, double& r, double& g, double& b);

/// out = clamp(in + delta). delta in [-1,1]. A delta of exactly 0
/// returns the input bit for bit.
ImageBuffer adjust_brightness(const ImageBuffer& image, double delta);

/// Adds delta to the hue channel modulo 1; saturation and value are
/// untouched. delta in [-0.5, 0.5]. Exact identity at delta 0.
ImageBuffer adjust_hue(const ImageBuffer& image, double delta);

/// out = clamp((in - 0.5) * (1 + factor) + 0.5): contrast about the
/// fixed mid-gray pivot, factor in (-1,1). Exact identity at factor 0.
ImageBuffer adjust_contrast(const ImageBuffer& image, double factor);

/// Scales the HSV saturation channel by (1 + factor), clamped; hue and
/// value are untouched. factor in (-1,1). Exact identity at factor 0.
ImageBuffer adjust_saturation(const ImageBuffer& image, double factor);

/// Mirrors the pixel array around the vertical and/or horizontal
/// central axis.
ImageBuffer flip_image(const ImageBuffer& image, bool flip_h, bool flip_v);

/// Draws one fair decision per axis (horizontal first, then vertical),
/// mirrors the pixels, and maps each box through flip_box with the same
/// flags. No change in 25% of calls.
std::pair<ImageBuffer, std::vector<Box>> random_flip(const ImageBuffer& image,
                                                     std::vector<Box> boxes, RandomStream& rng);

/// Record of what one augment() call actually did, one entry per stage;
/// serialized to the trace log for reproducibility audits.
struct AugmentationTrace {
  struct ColorOp {
    bool active = false;
    double value = 0.0;  // meaningful only when active
  };
  ColorOp brightness, hue, contrast, saturation;
  bool flip_horizontal = false;
  bool flip_vertical = false;
};

struct AugmentResult {
  ImageBuffer image;
  std::vector<Box> boxes;
  AugmentationTrace trace;
};

/// Applies the policy in the fixed order brightness -> hue -> contrast
/// -> saturation -> flip. Per color op: one activation draw u in [0,1);
/// when u < prob, one parameter draw uniform in [lo, hi); the flip
/// stage always draws exactly two axis decisions. The draw sequence is
/// pinned, so a seed reproduces the full augmentation trace. Boxes are
/// only touched by the flip stage.
AugmentResult augment(const ImageBuffer& image, std::vector<Box> boxes,
                      const AugmentationPolicy& policy, RandomStream& rng);

}  // namespace mitodet
