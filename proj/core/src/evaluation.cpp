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

#include "mitodet/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "mitodet/error.hpp"

namespace mitodet {

Prf compute_prf(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
  if (tp < 0 || fp < 0 || fn < 0) throw ValidationError("compute_prf: counts must be >= 0");
  Prf out;
  out.precision = (tp + fp) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  out.recall = (tp + fn) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  const double pr = out.precision + out.recall;
  out.f1 = pr == 0.0 ? 0.0 : 2.0 * out.precision * out.recall / pr;
  return out;
}

MatchResult match_detections(const std::vector<Detection>& detections,
                             const std::vector<Annotation>& ground_truth, double iou_threshold) {
  // Lookalikes are a training-time cue only; evaluation sees mitoses.
  std::vector<std::size_t> det_idx;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    if (detections[i].label == Label::Mitotic) det_idx.push_back(i);
  }
  std::vector<std::size_t> gt_idx;
  for (std::size_t i = 0; i < ground_truth.size(); ++i) {
    if (ground_truth[i].label == Label::Mitotic) gt_idx.push_back(i);
  }

  std::stable_sort(det_idx.begin(), det_idx.end(), [&](std::size_t a, std::size_t b) {
    return detections[a].score > detections[b].score;
  });

  MatchResult result;
  std::vector<bool> gt_taken(gt_idx.size(), false);
  for (const std::size_t d : det_idx) {
    double best = 0.0;
    std::size_t best_g = gt_idx.size();
    for (std::size_t g = 0; g < gt_idx.size(); ++g) {
      if (gt_taken[g]) continue;
      const double v = iou(detections[d].box, ground_truth[gt_idx[g]].box);
      if (v >= iou_threshold && v > best) {
        best = v;
        best_g = g;  // strict > keeps the lowest gt index on ties
      }
    }
    if (best_g < gt_idx.size()) {
      gt_taken[best_g] = true;
      result.matches.emplace_back(d, gt_idx[best_g]);
      ++result.tp;
    } else {
      ++result.fp;
    }
  }
  result.fn = static_cast<std::int64_t>(gt_idx.size()) - result.tp;
  return result;
}

namespace {

EvalReport report_at(const std::vector<ScoredImage>& images, double tau, double iou_threshold) {
  EvalReport report;
  report.threshold = tau;
  report.iou_threshold = iou_threshold;
  for (const ScoredImage& img : images) {
    const MatchResult m =
        match_detections(apply_threshold(img.detections, tau), img.ground_truth, iou_threshold);
    report.tp += m.tp;
    report.fp += m.fp;
    report.fn += m.fn;
  }
  const Prf prf = compute_prf(report.tp, report.fp, report.fn);
  report.precision = prf.precision;
  report.recall = prf.recall;
  report.f1 = prf.f1;
  return report;
}

std::vector<double> threshold_candidates(const std::vector<ScoredImage>& images) {
  std::set<double> scores;
  scores.insert(0.0);
  for (const ScoredImage& img : images) {
    for (const Detection& d : img.detections) scores.insert(d.score);
  }
  return {scores.begin(), scores.end()};
}

}  // namespace

TuneResult tune_threshold(const std::vector<ScoredImage>& images, double iou_threshold) {
  if (images.empty()) throw ValidationError("tune_threshold: image collection is empty");

  bool any_detections = false;
  for (const ScoredImage& img : images) any_detections |= !img.detections.empty();

  TuneResult result;
  if (!any_detections) {
    result.degenerate = true;
    result.report = report_at(images, 0.0, iou_threshold);
    return result;
  }

  // Largest tau wins ties: fewer detections at equal F1.
  bool have_best = false;
  for (const double tau : threshold_candidates(images)) {
    const EvalReport report = report_at(images, tau, iou_threshold);
    if (!have_best || report.f1 >= result.report.f1) {
      result.tau = tau;
      result.report = report;
      have_best = true;
    }
  }
  return result;
}

std::vector<PrPoint> pr_curve(const std::vector<ScoredImage>& images, double iou_threshold) {
  if (images.empty()) throw ValidationError("pr_curve: image collection is empty");
  std::vector<PrPoint> points;
  for (const double tau : threshold_candidates(images)) {
    const EvalReport r = report_at(images, tau, iou_threshold);
    points.push_back({tau, r.precision, r.recall, r.f1});
  }
  return points;
}

EvalReport evaluate_run(const PredictionSet& predictions, const std::vector<SlideRecord>& slides,
                        const EvaluateOptions& options) {
  std::set<std::string> known;
  for (const SlideRecord& s : slides) known.insert(s.slide_id);
  for (const auto& [slide_id, _] : predictions) {
    if (!known.count(slide_id)) {
      throw ValidationError("evaluate_run: predictions reference unknown slide '" + slide_id + "'");
    }
  }

  EvalReport report;
  report.threshold = options.tau;
  report.iou_threshold = options.eval_iou;
  static const std::vector<Detection> kNoDetections;
  for (const SlideRecord& slide : slides) {
    const auto it = predictions.find(slide.slide_id);
    const std::vector<Detection>& dets = it == predictions.end() ? kNoDetections : it->second;
    const std::vector<Detection> surviving = nms(apply_threshold(dets, options.tau), options.nms_iou);
    const MatchResult m = match_detections(surviving, slide.annotations, options.eval_iou);
    report.tp += m.tp;
    report.fp += m.fp;
    report.fn += m.fn;
  }
  const Prf prf = compute_prf(report.tp, report.fp, report.fn);
  report.precision = prf.precision;
  report.recall = prf.recall;
  report.f1 = prf.f1;
  return report;
}

EvalReport evaluate_run(const PredictionSet& predictions, const std::vector<SlideRecord>& slides,
                        double tau, double iou_threshold) {
  return evaluate_run(predictions, slides, EvaluateOptions{tau, iou_threshold, iou_threshold});
}

}  // namespace mitodet
