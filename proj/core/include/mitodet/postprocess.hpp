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

#include <vector>

#include "mitodet/dataset.hpp"
#include "mitodet/geometry.hpp"

namespace mitodet {

/// Coordinate frame a detection's box lives in.
enum class Frame : std::uint8_t { Tile, Slide };

/// Scored box emitted by a scorer, consumed by post-processing and
/// evaluation.
struct Detection {
  Box box;
  double score = 0.0;  // confidence in [0,1]
  Label label = Label::Mitotic;
  Frame frame = Frame::Tile;

  bool operator==(const Detection&) const = default;
};

/// Greedy non-maximum suppression, run per class independently so the
/// two classes never suppress each other. Detections are visited in
/// descending score order (ties by ascending input position); each kept
/// detection suppresses every remaining same-class detection whose IoU
/// with it is >= iou_threshold. Output is ordered by descending score
/// (same tie rule). Default threshold 0.1, matching the evaluation IoU.
std::vector<Detection> nms(const std::vector<Detection>& detections, double iou_threshold = 0.1);

/// Keeps exactly the detections with score >= tau, input order
/// preserved.
std::vector<Detection> apply_threshold(const std::vector<Detection>& detections, double tau);

}  // namespace mitodet
