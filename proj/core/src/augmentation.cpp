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

#include "mitodet/augmentation.hpp"

#include <algorithm>
#include <cmath>

#include "mitodet/error.hpp"

namespace mitodet {

ImageBuffer ImageBuffer::zeros(int width, int height) {
  if (width < 1 || height < 1) throw ValidationError("ImageBuffer: dimensions must be >= 1");
  ImageBuffer img;
  img.width = width;
  img.height = height;
  img.values.assign(static_cast<std::size_t>(width) * height * 3, 0.0f);
  return img;
}

ImageBuffer to_normalized(const RgbImage& image) {
  ImageBuffer out;
  out.width = image.width;
  out.height = image.height;
  out.values.resize(image.data.size());
  for (std::size_t i = 0; i < image.data.size(); ++i) {
    out.values[i] = static_cast<float>(image.data[i]) / 255.0f;
  }
  return out;
}

RgbImage to_rgb8(const ImageBuffer& image) {
  RgbImage out;
  out.width = image.width;
  out.height = image.height;
  out.data.resize(image.values.size());
  for (std::size_t i = 0; i < image.values.size(); ++i) {
    const long v = std::lround(static_cast<double>(image.values[i]) * 255.0);
    out.data[i] = static_cast<std::uint8_t>(std::clamp(v, 0l, 255l));
  }
  return out;
}

void validate_policy(const AugmentationPolicy& policy) {
  auto check = [](const ColorOpParams& op, const char* name) {
    if (!(op.prob >= 0.0 && op.prob <= 1.0)) {
      throw ValidationError(std::string("policy: ") + name + " probability must be in [0,1]");
    }
    if (op.lo > op.hi) {
      throw ValidationError(std::string("policy: ") + name + " range is not ordered");
    }
  };
  check(policy.brightness, "brightness");
  check(policy.hue, "hue");
  check(policy.contrast, "contrast");
  check(policy.saturation, "saturation");
  if (!(policy.flip_prob_per_axis >= 0.0 && policy.flip_prob_per_axis <= 1.0)) {
    throw ValidationError("policy: flip probability must be in [0,1]");
  }
}

void rgb_to_hsv(double r, double g, double b, double& h, double& s, double& v) {
  const double maxc = std::max({r, g, b});
  const double minc = std::min({r, g, b});
  const double d = maxc - minc;
  v = maxc;
  s = maxc <= 0.0 ? 0.0 : d / maxc;
  if (d <= 0.0) {
    h = 0.0;  // achromatic: hue defined as 0 so the ops are total
    return;
  }
  double h6;
  if (maxc == r) {
    h6 = (g - b) / d;
    if (h6 < 0.0) h6 += 6.0;
  } else if (maxc == g) {
    h6 = (b - r) / d + 2.0;
  } else {
    h6 = (r - g) / d + 4.0;
  }
  h = h6 / 6.0;
  if (h >= 1.0) h -= 1.0;
}

void hsv_to_rgb(double h, double s, double v, double& r, double& g, double& b) {
  const double h6 = (h - std::floor(h)) * 6.0;
  const int i = static_cast<int>(h6) % 6;
  const double f = h6 - std::floor(h6);
  const double p = v * (1.0 - s);
  const double q = v * (1.0 - s * f);
  const double t = v * (1.0 - s * (1.0 - f));
  switch (i) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
  }
}

namespace {

float clamp01(double v) { return static_cast<float>(std::clamp(v, 0.0, 1.0)); }

template <typename PerPixel>
ImageBuffer map_pixels(const ImageBuffer& image, PerPixel&& fn) {
  ImageBuffer out;
  out.width = image.width;
  out.height = image.height;
  out.values.resize(image.values.size());
  for (std::size_t i = 0; i < image.values.size(); i += 3) {
    fn(image.values[i], image.values[i + 1], image.values[i + 2], out.values[i],
       out.values[i + 1], out.values[i + 2]);
  }
  return out;
}

}  // namespace

ImageBuffer adjust_brightness(const ImageBuffer& image, double delta) {
  if (!(delta >= -1.0 && delta <= 1.0)) throw ValidationError("adjust_brightness: delta must be in [-1,1]");
  if (delta == 0.0) return image;  // bit-exact identity
  ImageBuffer out = image;
  for (float& v : out.values) v = clamp01(static_cast<double>(v) + delta);
  return out;
}

ImageBuffer adjust_hue(const ImageBuffer& image, double delta) {
  if (!(delta >= -0.5 && delta <= 0.5)) throw ValidationError("adjust_hue: delta must be in [-0.5,0.5]");
  if (delta == 0.0) return image;
  return map_pixels(image, [delta](float r, float g, float b, float& ro, float& go, float& bo) {
    double h, s, v;
    rgb_to_hsv(r, g, b, h, s, v);
    double hh = h + delta;
    hh -= std::floor(hh);  // wrap into [0,1)
    double rr, gg, bb;
    hsv_to_rgb(hh, s, v, rr, gg, bb);
    ro = clamp01(rr);
    go = clamp01(gg);
    bo = clamp01(bb);
  });
}

ImageBuffer adjust_contrast(const ImageBuffer& image, double factor) {
  if (!(factor > -1.0 && factor < 1.0)) throw ValidationError("adjust_contrast: factor must be in (-1,1)");
  if (factor == 0.0) return image;
  const double gain = 1.0 + factor;
  ImageBuffer out = image;
  for (float& v : out.values) v = clamp01((static_cast<double>(v) - 0.5) * gain + 0.5);
  return out;
}

ImageBuffer adjust_saturation(const ImageBuffer& image, double factor) {
  if (!(factor > -1.0 && factor < 1.0)) throw ValidationError("adjust_saturation: factor must be in (-1,1)");
  if (factor == 0.0) return image;
  const double gain = 1.0 + factor;
  return map_pixels(image, [gain](float r, float g, float b, float& ro, float& go, float& bo) {
    double h, s, v;
    rgb_to_hsv(r, g, b, h, s, v);
    const double ss = std::clamp(s * gain, 0.0, 1.0);
    double rr, gg, bb;
    hsv_to_rgb(h, ss, v, rr, gg, bb);
    ro = clamp01(rr);
    go = clamp01(gg);
    bo = clamp01(bb);
  });
}

ImageBuffer flip_image(const ImageBuffer& image, bool flip_h, bool flip_v) {
  if (!flip_h && !flip_v) return image;
  ImageBuffer out;
  out.width = image.width;
  out.height = image.height;
  out.values.resize(image.values.size());
  for (int y = 0; y < image.height; ++y) {
    const int sy = flip_v ? image.height - 1 - y : y;
    for (int x = 0; x < image.width; ++x) {
      const int sx = flip_h ? image.width - 1 - x : x;
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = image.at(sx, sy, c);
    }
  }
  return out;
}

std::pair<ImageBuffer, std::vector<Box>> random_flip(const ImageBuffer& image,
                                                     std::vector<Box> boxes, RandomStream& rng) {
  const bool flip_h = rng.bernoulli(0.5);
  const bool flip_v = rng.bernoulli(0.5);
  for (Box& b : boxes) b = flip_box(b, image.width, image.height, flip_h, flip_v);
  return {flip_image(image, flip_h, flip_v), std::move(boxes)};
}

AugmentResult augment(const ImageBuffer& image, std::vector<Box> boxes,
                      const AugmentationPolicy& policy, RandomStream& rng) {
  validate_policy(policy);

  AugmentResult result{image, std::move(boxes), {}};

  auto color_stage = [&rng](const ColorOpParams& op, AugmentationTrace::ColorOp& trace,
                            auto&& apply) {
    if (rng.uniform() < op.prob) {
      trace.active = true;
      trace.value = rng.uniform(op.lo, op.hi);
      apply(trace.value);
    }
  };

  color_stage(policy.brightness, result.trace.brightness,
              [&](double v) { result.image = adjust_brightness(result.image, v); });
  color_stage(policy.hue, result.trace.hue,
              [&](double v) { result.image = adjust_hue(result.image, v); });
  color_stage(policy.contrast, result.trace.contrast,
              [&](double v) { result.image = adjust_contrast(result.image, v); });
  color_stage(policy.saturation, result.trace.saturation,
              [&](double v) { result.image = adjust_saturation(result.image, v); });

  result.trace.flip_horizontal = rng.bernoulli(policy.flip_prob_per_axis);
  result.trace.flip_vertical = rng.bernoulli(policy.flip_prob_per_axis);
  if (result.trace.flip_horizontal || result.trace.flip_vertical) {
    for (Box& b : result.boxes) {
      b = flip_box(b, image.width, image.height, result.trace.flip_horizontal,
                   result.trace.flip_vertical);
    }
    result.image = flip_image(result.image, result.trace.flip_horizontal,
                              result.trace.flip_vertical);
  }
  return result;
}

}  // namespace mitodet
