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

#include "mitodet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mitodet/error.hpp"

namespace mitodet {

Box::Box(double x, double y, double w, double h) : x_(x), y_(y), w_(w), h_(h) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(w) || !std::isfinite(h)) {
    throw ValidationError("Box: coordinates must be finite");
  }
  if (w <= 0.0 || h <= 0.0) {
    throw ValidationError("Box: width and height must be positive, got w=" +
                          std::to_string(w) + " h=" + std::to_string(h));
  }
}

double intersection_area(const Box& a, const Box& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.x(), b.x());
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y(), b.y());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  return iw * ih;
}

double iou(const Box& a, const Box& b) {
  if (a == b) return 1.0;  // exact: (x + w) - x need not round back to w
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  return std::min(inter / uni, 1.0);  // uni > 0; min guards ulp-level overshoot
}

bool box_in_frame(const Box& b, double frame_w, double frame_h) {
  return b.x() >= 0.0 && b.y() >= 0.0 && b.right() <= frame_w && b.bottom() <= frame_h;
}

Box flip_box(const Box& b, double frame_w, double frame_h, bool flip_h, bool flip_v) {
  if (!box_in_frame(b, frame_w, frame_h)) {
    throw ValidationError("flip_box: box lies outside the frame");
  }
  const double x = flip_h ? frame_w - b.x() - b.w() : b.x();
  const double y = flip_v ? frame_h - b.y() - b.h() : b.y();
  return Box(x, y, b.w(), b.h());
}

std::optional<Box> clip_box(const Box& b, double frame_w, double frame_h) {
  if (box_in_frame(b, frame_w, frame_h)) return b;  // untouched, bit for bit
  const double x0 = std::max(b.x(), 0.0);
  const double y0 = std::max(b.y(), 0.0);
  const double x1 = std::min(b.right(), frame_w);
  const double y1 = std::min(b.bottom(), frame_h);
  if (x1 - x0 <= 0.0 || y1 - y0 <= 0.0) return std::nullopt;
  return Box(x0, y0, x1 - x0, y1 - y0);
}

Box translate_box(const Box& b, double dx, double dy) {
  return Box(b.x() + dx, b.y() + dy, b.w(), b.h());
}

}  // namespace mitodet
