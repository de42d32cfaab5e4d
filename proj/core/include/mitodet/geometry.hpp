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

#include <optional>

namespace mitodet {

/// Axis-aligned box in continuous pixel coordinates.
///
/// Top-left origin, y grows downward, encoded as (x, y, w, h) with
/// w > 0 and h > 0 enforced at construction, so area() is always
/// positive and IoU never divides by zero. Coordinates are real-valued:
/// clipping a 50x50 annotation must not snap to integers, or IoU
/// comparisons against the 0.1 threshold become unstable.
class Box {
 public:
  /// Throws ValidationError unless all fields are finite and w, h > 0.
  Box(double x, double y, double w, double h);

  double x() const { return x_; }
  double y() const { return y_; }
  double w() const { return w_; }
  double h() const { return h_; }

  double right() const { return x_ + w_; }
  double bottom() const { return y_ + h_; }
  double center_x() const { return x_ + w_ / 2.0; }
  double center_y() const { return y_ + h_ / 2.0; }
  double area() const { return w_ * h_; }

  bool operator==(const Box&) const = default;

 private:
  double x_, y_, w_, h_;
};

/// Area of the intersection of a and b; 0 when disjoint.
double intersection_area(const Box& a, const Box& b);

/// Intersection over union in [0, 1]. Symmetric; 0 when disjoint,
/// 1 iff the boxes coincide. Threshold comparisons throughout the
/// pipeline are inclusive (iou >= threshold).
double iou(const Box& a, const Box& b);

/// Mirrors b inside a frame_w x frame_h frame. A horizontal flip maps
/// x -> frame_w - x - w, a vertical flip maps y -> frame_h - y - h;
/// width and height are unchanged. Throws ValidationError when b does
/// not lie inside the frame.
Box flip_box(const Box& b, double frame_w, double frame_h, bool flip_h, bool flip_v);

/// Intersection of b with [0, frame_w] x [0, frame_h], or nullopt when
/// the intersection has zero area.
std::optional<Box> clip_box(const Box& b, double frame_w, double frame_h);

/// Shifts b by (dx, dy).
Box translate_box(const Box& b, double dx, double dy);

/// True when b lies entirely inside the frame.
bool box_in_frame(const Box& b, double frame_w, double frame_h);

}  // namespace mitodet
