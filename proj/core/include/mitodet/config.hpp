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
#include <filesystem>
#include <string>
#include <vector>

#include "mitodet/augmentation.hpp"

namespace mitodet {

struct AnchorConfig {
  std::vector<int> strides{4, 8, 16, 32};
  double scale = 50.0;
  double pos_iou = 0.7;
  double neg_iou = 0.3;
  std::size_t batch_size = 256;
  double positive_fraction = 0.25;

  bool operator==(const AnchorConfig&) const = default;
};

/// Every tunable of the pipeline in one place. The defaults are the
/// published operating point: 1024-px tiles, 50-px boxes, 80% empty-
/// tile drop, the augmentation schedule in AugmentationPolicy, a single
/// 50-px square anchor scale with a 25% positive fraction, and 0.1 IoU
/// for both NMS and evaluation. Every field can be overridden from the
/// config file.
struct PipelineConfig {
  std::uint64_t seed = 0;
  int tile_size = 1024;
  double box_size = 50.0;
  double drop_prob = 0.8;
  AugmentationPolicy augmentation;
  AnchorConfig anchors;
  double nms_iou = 0.1;
  double eval_iou = 0.1;
};

bool operator==(const PipelineConfig& a, const PipelineConfig& b);

void validate_config(const PipelineConfig& config);

/// Strict parse: unknown keys and wrong types are ParseErrors, so a
/// typo cannot silently fall back to a default. Missing keys take their
/// defaults.
PipelineConfig config_from_json_text(const std::string& text, const std::string& origin);
PipelineConfig load_config(const std::filesystem::path& path);

/// Full effective-config dump; re-ingesting it reproduces the identical
/// configuration.
std::string config_to_json_text(const PipelineConfig& config);
void save_config(const std::filesystem::path& path, const PipelineConfig& config);

}  // namespace mitodet
