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

#include <filesystem>
#include <string>
#include <vector>

#include "mitodet/augmentation.hpp"
#include "mitodet/dataset.hpp"
#include "mitodet/evaluation.hpp"

namespace mitodet {

// JSON file formats. All writers emit deterministic bytes (sorted keys,
// round-trip number formatting) and write atomically: temp file in the
// same directory, then rename.

/// Writes `content` to `path` via a temp file + rename.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

// Dataset manifest: {"slides": [{slide_id, scanner_id, width, height,
// image?, annotations: [{x,y,w,h,label}]}]}. Loading validates slide
// invariants and rejects duplicate ids.
std::vector<SlideRecord> load_manifest(const std::filesystem::path& path);
std::vector<SlideRecord> manifest_from_json_text(const std::string& text, const std::string& origin);
void save_manifest(const std::filesystem::path& path, const std::vector<SlideRecord>& slides);
std::string manifest_to_json_text(const std::vector<SlideRecord>& slides);

/// File name a tile's pixels are stored under:
/// <slide_id>_x<origin_x>_y<origin_y>.png
std::string tile_image_name(const Tile& tile);

// Tiles sidecar manifest: {"tile_size", "tiles": [{slide_id, origin_x,
// origin_y, size, image?, annotations: [{x,y,w,h,label,truncated}]}]}.
// "image" is present iff the tile's pixels were written next to the
// manifest.
void save_tiles_manifest(const std::filesystem::path& path, const std::vector<Tile>& tiles,
                         int tile_size);
std::string tiles_manifest_to_json_text(const std::vector<Tile>& tiles, int tile_size);
/// Loads tile metadata; with load_pixels, PNGs referenced by "image"
/// are read relative to the manifest's directory.
std::vector<Tile> load_tiles_manifest(const std::filesystem::path& path, bool load_pixels = false);

// Split plans: {"seed", "train", "validation", "test"}; fold lists wrap
// one plan per held-out scanner.
std::string split_plan_to_json_text(const SplitPlan& plan);
SplitPlan split_plan_from_json_text(const std::string& text, const std::string& origin);
void save_split_plan(const std::filesystem::path& path, const SplitPlan& plan);
SplitPlan load_split_plan(const std::filesystem::path& path);
void save_split_folds(const std::filesystem::path& path, const std::vector<SplitPlan>& folds,
                      const std::vector<std::string>& held_out_scanners);

// Evaluation reports.
std::string report_to_json_text(const EvalReport& report);
EvalReport report_from_json_text(const std::string& text, const std::string& origin);
void save_report(const std::filesystem::path& path, const EvalReport& report);
EvalReport load_report(const std::filesystem::path& path);
/// Human-readable table for terminal output.
std::string format_report_table(const EvalReport& report);

/// One structured trace line per augment() call (JSONL): activations,
/// drawn parameters, flip decisions, plus a caller-supplied subject id.
std::string trace_to_json_line(const std::string& subject, const AugmentationTrace& trace);

/// PR-curve dump as delimited text: tau,precision,recall,f1 with a
/// header row, one row per threshold candidate in ascending order.
std::string pr_curve_to_csv(const std::vector<PrPoint>& points);

}  // namespace mitodet
