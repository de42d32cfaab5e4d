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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mitodet/dataset.hpp"
#include "mitodet/postprocess.hpp"

namespace mitodet {

/// Detection counts plus derived metrics at one operating point.
/// precision = tp/(tp+fp), recall = tp/(tp+fn), f1 = 2PR/(P+R), each
/// with 0/0 defined as 0 so the report is total.
struct EvalReport {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double threshold = 0.0;
  double iou_threshold = 0.0;

  bool operator==(const EvalReport&) const = default;
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

Prf compute_prf(std::int64_t tp, std::int64_t fp, std::int64_t fn);

struct MatchResult {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  // (detection index, ground-truth index) pairs over the *mitotic*
  // subsets, in claim order.
  std::vector<std::pair<std::size_t, std::size_t>> matches;
};

/// Greedy one-to-one matching at the given IoU threshold. Only
/// mitotic-labeled detections and mitotic ground truth participate;
/// lookalikes are dropped on both sides before matching. Detections are
/// visited in descending score order (ties by input position) and each
/// claims the unmatched gt with the highest IoU, provided it is >=
/// iou_threshold (ties to the lowest gt index). Guarantees
/// tp + fn == number of mitotic gt.
MatchResult match_detections(const std::vector<Detection>& detections,
                             const std::vector<Annotation>& ground_truth, double iou_threshold);

/// Detections and ground truth of one image (or one slide), the unit
/// the threshold search aggregates over.
struct ScoredImage {
  std::vector<Detection> detections;
  std::vector<Annotation> ground_truth;
};

struct TuneResult {
  double tau = 0.0;
  EvalReport report;
  bool degenerate = false;  // no detections anywhere
};

/// Grid search for the confidence threshold maximizing F1 over the
/// whole image set. Candidates are every distinct detection score plus
/// 0, which makes the search exhaustive: F1 only changes at observed
/// scores. Counts are summed across images before computing F1; ties
/// are broken toward the largest tau.
TuneResult tune_threshold(const std::vector<ScoredImage>& images, double iou_threshold);

struct PrPoint {
  double tau = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// The full candidate sweep behind tune_threshold, in ascending tau
/// order, for PR-curve dumps.
std::vector<PrPoint> pr_curve(const std::vector<ScoredImage>& images, double iou_threshold);

/// Detections grouped by slide id.
using PredictionSet = std::map<std::string, std::vector<Detection>>;

struct EvaluateOptions {
  double tau = 0.0;
  double nms_iou = 0.1;
  double eval_iou = 0.1;
};

/// End-to-end scoring of a prediction run: per slide, threshold at tau,
/// per-class NMS, then match against that slide's annotations; counts
/// are summed over slides into a single report. A prediction keyed by a
/// slide id absent from the manifest is a ValidationError naming the
/// id.
EvalReport evaluate_run(const PredictionSet& predictions, const std::vector<SlideRecord>& slides,
                        const EvaluateOptions& options);

/// Spec-shaped convenience: one IoU threshold for both NMS and
/// matching.
EvalReport evaluate_run(const PredictionSet& predictions, const std::vector<SlideRecord>& slides,
                        double tau, double iou_threshold);

}  // namespace mitodet
