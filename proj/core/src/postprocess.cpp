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

#include "mitodet/postprocess.hpp"

#include <algorithm>
#include <numeric>

#include "mitodet/error.hpp"

namespace mitodet {

std::vector<Detection> nms(const std::vector<Detection>& detections, double iou_threshold) {
  if (!(iou_threshold >= 0.0)) throw ValidationError("nms: iou_threshold must be >= 0");

  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detections[a].score > detections[b].score;  // stable: ties keep input order
  });

  std::vector<bool> suppressed(detections.size(), false);
  std::vector<Detection> kept;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t i = order[pos];
    if (suppressed[i]) continue;
    kept.push_back(detections[i]);
    for (std::size_t rest = pos + 1; rest < order.size(); ++rest) {
      const std::size_t j = order[rest];
      if (suppressed[j] || detections[j].label != detections[i].label) continue;
      if (iou(detections[j].box, detections[i].box) >= iou_threshold) suppressed[j] = true;
    }
  }
  return kept;
}

std::vector<Detection> apply_threshold(const std::vector<Detection>& detections, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw ValidationError("apply_threshold: tau must be in [0,1]");
  std::vector<Detection> kept;
  kept.reserve(detections.size());
  for (const Detection& d : detections) {
    if (d.score >= tau) kept.push_back(d);
  }
  return kept;
}

}  // namespace mitodet
