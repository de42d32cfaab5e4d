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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <set>

#include <json.hpp>

#include "mitodet/anchors.hpp"
#include "mitodet/augmentation.hpp"
#include "mitodet/dataset.hpp"
#include "mitodet/error.hpp"
#include "mitodet/evaluation.hpp"
#include "mitodet/formats.hpp"
#include "mitodet/png_io.hpp"
#include "mitodet/postprocess.hpp"
#include "mitodet/synthetic.hpp"

namespace mitodet::cli {

namespace fs = std::filesystem;
using nlohmann::json;

PipelineConfig GlobalOptions::resolve() const {
  PipelineConfig config;
  if (!config_path.empty()) config = load_config(config_path);
  if (seed) config.seed = *seed;
  validate_config(config);
  return config;
}

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir.string() + ": " + ec.message());
}

fs::path resolve_relative(const fs::path& base_file, const std::string& maybe_relative) {
  const fs::path p(maybe_relative);
  return p.is_absolute() ? p : base_file.parent_path() / p;
}

/// Oracle-scores every tile of every slide and collects the detections
/// in slide coordinates. Stream contract: (seed, "score", slide_id,
/// origin_x, origin_y).
PredictionSet score_manifest(const std::vector<SlideRecord>& slides, const PipelineConfig& config,
                             const ScorerConfig& oracle_config) {
  const OracleScorer oracle(oracle_config);
  PredictionSet predictions;
  for (const SlideRecord& slide : slides) {
    std::vector<Detection> collected;
    for (const Tile& tile : tile_slide(slide, config.tile_size)) {
      RandomStream rng = StreamKey(config.seed)
                             .with("score")
                             .with(slide.slide_id)
                             .with(tile.origin_x)
                             .with(tile.origin_y)
                             .stream();
      for (const Detection& d : oracle.score_tile(tile, rng)) {
        collected.push_back({translate_box(d.box, tile.origin_x, tile.origin_y), d.score, d.label,
                             Frame::Slide});
      }
    }
    if (!collected.empty()) predictions[slide.slide_id] = std::move(collected);
  }
  return predictions;
}

PredictionSet postprocess_predictions(const PredictionSet& predictions, double tau, double nms_iou) {
  PredictionSet out;
  for (const auto& [slide_id, dets] : predictions) {
    std::vector<Detection> kept = nms(apply_threshold(dets, tau), nms_iou);
    if (!kept.empty()) out[slide_id] = std::move(kept);
  }
  return out;
}

std::vector<ScoredImage> scored_images(const PredictionSet& predictions,
                                       const std::vector<SlideRecord>& slides) {
  std::vector<ScoredImage> images;
  images.reserve(slides.size());
  for (const SlideRecord& slide : slides) {
    ScoredImage img;
    const auto it = predictions.find(slide.slide_id);
    if (it != predictions.end()) img.detections = it->second;
    img.ground_truth = slide.annotations;
    images.push_back(std::move(img));
  }
  return images;
}

json tune_result_to_json(const TuneResult& result) {
  return json{{"tau", result.tau},
              {"degenerate", result.degenerate},
              {"report", json::parse(report_to_json_text(result.report))}};
}

const char* anchor_label_name(AnchorLabel label) {
  switch (label) {
    case AnchorLabel::Positive:
      return "positive";
    case AnchorLabel::Negative:
      return "negative";
    case AnchorLabel::Ignore:
      return "ignore";
  }
  return "?";
}

}  // namespace

void run_split(const GlobalOptions& global, const SplitOptions& opt) {
  const PipelineConfig config = global.resolve();
  const auto slides = load_manifest(opt.manifest);

  if (opt.leave_one_scanner_out) {
    const auto folds = split_leave_one_scanner_out(slides);
    std::vector<std::string> scanners;
    for (const SlideRecord& s : slides) scanners.push_back(s.scanner_id);
    std::sort(scanners.begin(), scanners.end());
    scanners.erase(std::unique(scanners.begin(), scanners.end()), scanners.end());
    save_split_folds(opt.out, folds, scanners);
    std::cout << folds.size() << " folds written to " << opt.out << "\n";
    return;
  }

  if (opt.n_train < 0 || opt.n_val < 0 || opt.n_test < 0) {
    throw ValidationError("split: either --leave-one-scanner-out or all of --train/--val/--test");
  }
  const SplitPlan plan = split_random(slides, static_cast<std::size_t>(opt.n_train),
                                      static_cast<std::size_t>(opt.n_val),
                                      static_cast<std::size_t>(opt.n_test), config.seed);
  save_split_plan(opt.out, plan);
  std::cout << "split " << plan.train.size() << "/" << plan.validation.size() << "/"
            << plan.test.size() << " written to " << opt.out << "\n";
}

void run_tile(const GlobalOptions& global, const TileOptions& opt) {
  const PipelineConfig config = global.resolve();
  const int tile_size = opt.tile_size > 0 ? opt.tile_size : config.tile_size;
  const auto slides = load_manifest(opt.manifest);
  ensure_dir(opt.out_dir);

  std::vector<Tile> all_tiles;
  for (const SlideRecord& slide : slides) {
    std::optional<RgbImage> pixels;
    if (!slide.image_source.empty()) {
      pixels = read_png(resolve_relative(opt.manifest, slide.image_source));
    }
    auto tiles = tile_slide(slide, tile_size, !opt.overlap_mode, pixels ? &*pixels : nullptr);
    for (Tile& tile : tiles) {
      if (tile.pixels) write_png(fs::path(opt.out_dir) / tile_image_name(tile), *tile.pixels);
      all_tiles.push_back(std::move(tile));
    }
  }

  if (opt.sample_empty) {
    RandomStream rng = StreamKey(config.seed).with("sample-empty").stream();
    all_tiles = sample_training_tiles(all_tiles, config.drop_prob, rng);
  }

  save_tiles_manifest(fs::path(opt.out_dir) / "tiles.json", all_tiles, tile_size);
  std::cout << all_tiles.size() << " tiles written to " << opt.out_dir << "\n";
}

void run_augment(const GlobalOptions& global, const AugmentOptions& opt) {
  const PipelineConfig config = global.resolve();
  auto tiles = load_tiles_manifest(opt.tiles_manifest, /*load_pixels=*/true);
  ensure_dir(opt.out_dir);

  std::string trace_log;
  for (Tile& tile : tiles) {
    if (!tile.pixels) {
      throw ValidationError("augment: tile " + tile_image_name(tile) +
                            " has no image; run `tile` on a manifest with slide images first");
    }
    RandomStream rng = StreamKey(config.seed)
                           .with("augment")
                           .with(tile.slide_id)
                           .with(tile.origin_x)
                           .with(tile.origin_y)
                           .with(opt.epoch)
                           .stream();
    std::vector<Box> boxes;
    boxes.reserve(tile.annotations.size());
    for (const Annotation& ann : tile.annotations) boxes.push_back(ann.box);

    AugmentResult result = augment(to_normalized(*tile.pixels), boxes, config.augmentation, rng);

    for (std::size_t i = 0; i < tile.annotations.size(); ++i) {
      tile.annotations[i].box = result.boxes[i];
    }
    tile.pixels = to_rgb8(result.image);
    write_png(fs::path(opt.out_dir) / tile_image_name(tile), *tile.pixels);
    trace_log += trace_to_json_line(tile_image_name(tile), result.trace) + "\n";
  }

  save_tiles_manifest(fs::path(opt.out_dir) / "tiles.json", tiles,
                      tiles.empty() ? config.tile_size : tiles.front().size);
  atomic_write_text(fs::path(opt.out_dir) / "trace.jsonl", trace_log);
  std::cout << tiles.size() << " augmented tiles written to " << opt.out_dir << "\n";
}

void run_anchors(const GlobalOptions& global, const AnchorsOptions& opt) {
  const PipelineConfig config = global.resolve();
  const int tile_size = opt.tile_size > 0 ? opt.tile_size : config.tile_size;

  std::optional<std::vector<Annotation>> gt;
  if (!opt.tiles_manifest.empty()) {
    for (const Tile& tile : load_tiles_manifest(opt.tiles_manifest)) {
      if (tile.slide_id == opt.slide_id && tile.origin_x == opt.origin_x &&
          tile.origin_y == opt.origin_y) {
        gt = tile.annotations;
        break;
      }
    }
    if (!gt) {
      throw ValidationError("anchors: no tile " + opt.slide_id + " @ (" +
                            std::to_string(opt.origin_x) + "," + std::to_string(opt.origin_y) +
                            ") in " + opt.tiles_manifest);
    }
  }

  std::vector<int> strides = opt.stride > 0 ? std::vector<int>{opt.stride} : config.anchors.strides;

  json levels = json::array();
  for (const int stride : strides) {
    const AnchorGrid grid = generate_anchors(tile_size, stride, config.anchors.scale);
    json level{{"stride", stride}, {"cells_x", grid.cells_x}, {"cells_y", grid.cells_y}};
    json boxes = json::array();
    for (const Box& a : grid.anchors) boxes.push_back({a.x(), a.y(), a.w(), a.h()});
    level["anchors"] = std::move(boxes);

    if (gt) {
      const AnchorLabels labels =
          match_anchors(grid, *gt, config.anchors.pos_iou, config.anchors.neg_iou);
      json label_list = json::array();
      for (const AnchorLabel l : labels.labels) label_list.push_back(anchor_label_name(l));
      level["labels"] = std::move(label_list);
      level["matched_gt"] = labels.matched_gt;
      level["counts"] = {{"positive", labels.count(AnchorLabel::Positive)},
                         {"negative", labels.count(AnchorLabel::Negative)},
                         {"ignore", labels.count(AnchorLabel::Ignore)}};

      if (opt.sample_batch) {
        RandomStream rng = StreamKey(config.seed).with("anchors-sample").with(stride).stream();
        json batch = json::array();
        for (const SampledAnchor& s : sample_minibatch(labels, config.anchors.batch_size,
                                                       config.anchors.positive_fraction, rng)) {
          batch.push_back({{"index", s.index}, {"label", anchor_label_name(s.label)}});
        }
        level["batch"] = std::move(batch);
      }
      std::cout << "stride " << stride << ": " << grid.anchors.size() << " anchors, "
                << level["counts"]["positive"] << " positive / " << level["counts"]["negative"]
                << " negative / " << level["counts"]["ignore"] << " ignored\n";
    } else {
      std::cout << "stride " << stride << ": " << grid.anchors.size() << " anchors\n";
    }
    levels.push_back(std::move(level));
  }

  const json root{{"tile_size", tile_size}, {"scale", config.anchors.scale}, {"levels", std::move(levels)}};
  atomic_write_text(opt.out, root.dump(2) + "\n");
}

void run_score(const GlobalOptions& global, const ScoreOptions& opt) {
  const PipelineConfig config = global.resolve();

  if (!opt.passthrough.empty()) {
    // Validate + normalize an externally produced table.
    save_predictions(fs::path(opt.out), load_predictions(opt.passthrough));
    std::cout << "validated predictions written to " << opt.out << "\n";
    return;
  }

  const auto slides = load_manifest(opt.manifest);
  const PredictionSet predictions = score_manifest(slides, config, opt.oracle);
  save_predictions(fs::path(opt.out), predictions);
  std::size_t total = 0;
  for (const auto& [_, dets] : predictions) total += dets.size();
  std::cout << total << " detections written to " << opt.out << "\n";
}

void run_postprocess(const GlobalOptions& global, const PostprocessOptions& opt) {
  const PipelineConfig config = global.resolve();
  const double nms_iou = opt.nms_iou >= 0.0 ? opt.nms_iou : config.nms_iou;
  const PredictionSet out = postprocess_predictions(load_predictions(opt.in), opt.tau, nms_iou);
  save_predictions(fs::path(opt.out), out);
  std::size_t total = 0;
  for (const auto& [_, dets] : out) total += dets.size();
  std::cout << total << " detections kept at tau=" << opt.tau << ", nms_iou=" << nms_iou << "\n";
}

void run_evaluate(const GlobalOptions& global, const EvaluateOptionsCli& opt) {
  const PipelineConfig config = global.resolve();
  const auto slides = load_manifest(opt.manifest);
  const PredictionSet predictions = load_predictions(opt.predictions);
  const EvalReport report =
      evaluate_run(predictions, slides, EvaluateOptions{opt.tau, config.nms_iou, config.eval_iou});
  std::cout << format_report_table(report);
  if (!opt.out.empty()) save_report(opt.out, report);
}

void run_tune(const GlobalOptions& global, const TuneOptions& opt) {
  const PipelineConfig config = global.resolve();
  const auto slides = load_manifest(opt.manifest);
  PredictionSet predictions = load_predictions(opt.predictions);
  if (!opt.skip_nms) predictions = postprocess_predictions(predictions, 0.0, config.nms_iou);

  const auto images = scored_images(predictions, slides);
  const TuneResult result = tune_threshold(images, config.eval_iou);
  std::cout << "tau* = " << result.tau << (result.degenerate ? " (degenerate: no detections)" : "")
            << "\n"
            << format_report_table(result.report);
  if (!opt.out.empty()) atomic_write_text(opt.out, tune_result_to_json(result).dump(2) + "\n");
  if (!opt.pr_curve_out.empty()) {
    atomic_write_text(opt.pr_curve_out, pr_curve_to_csv(pr_curve(images, config.eval_iou)));
  }
}

void run_demo(const GlobalOptions& global, const DemoOptions& opt) {
  const PipelineConfig config = global.resolve();
  const fs::path dir(opt.out_dir);
  ensure_dir(dir);

  save_config(dir / "effective_config.json", config);

  // Synthetic slide corpus shaped like the real one.
  SyntheticDatasetConfig synth;
  synth.n_slides = opt.n_slides;
  synth.box_size = config.box_size;
  synth.placement_grid = config.tile_size;
  synth.seed = config.seed;
  const auto slides = generate_slides(synth);
  save_manifest(dir / "manifest.json", slides);

  // 70/10/20 split, the published proportions.
  const auto n = static_cast<std::size_t>(opt.n_slides);
  const auto n_train = static_cast<std::size_t>(std::llround(n * 0.7));
  const auto n_val = static_cast<std::size_t>(std::llround(n * 0.1));
  const SplitPlan plan = split_random(slides, n_train, n_val, n - n_train - n_val, config.seed);
  save_split_plan(dir / "plan.json", plan);

  // Tiles: full set, plus the train subset after empty-tile rejection.
  std::vector<Tile> all_tiles;
  std::vector<Tile> train_tiles;
  const std::set<std::string> train_ids(plan.train.begin(), plan.train.end());
  for (const SlideRecord& slide : slides) {
    for (Tile& tile : tile_slide(slide, config.tile_size)) {
      if (train_ids.count(tile.slide_id)) train_tiles.push_back(tile);
      all_tiles.push_back(std::move(tile));
    }
  }
  save_tiles_manifest(dir / "tiles.json", all_tiles, config.tile_size);
  RandomStream sample_rng = StreamKey(config.seed).with("demo-sample").stream();
  train_tiles = sample_training_tiles(train_tiles, config.drop_prob, sample_rng);
  save_tiles_manifest(dir / "train_tiles.json", train_tiles, config.tile_size);

  // Score -> postprocess -> tune -> evaluate.
  ScorerConfig oracle;
  oracle.recall_sim = opt.oracle_recall;
  oracle.fp_rate = opt.oracle_fp_rate;
  oracle.jitter = opt.oracle_jitter;
  oracle.seed = config.seed;
  const PredictionSet predictions = score_manifest(slides, config, oracle);
  save_predictions(dir / "detections.csv", predictions);

  const PredictionSet suppressed = postprocess_predictions(predictions, 0.0, config.nms_iou);
  save_predictions(dir / "postprocessed.csv", suppressed);

  const TuneResult tuned = tune_threshold(scored_images(suppressed, slides), config.eval_iou);
  atomic_write_text(dir / "tuned.json", tune_result_to_json(tuned).dump(2) + "\n");

  const EvalReport report = evaluate_run(
      predictions, slides, EvaluateOptions{tuned.tau, config.nms_iou, config.eval_iou});
  save_report(dir / "report.json", report);

  // Augmentation leg: a small test pattern through the full policy.
  const RgbImage pattern = generate_test_pattern(192, 192, config.seed);
  write_png(dir / "pattern.png", pattern);
  RandomStream aug_rng = StreamKey(config.seed).with("demo-augment").stream();
  const std::vector<Box> boxes{Box(20, 20, 50, 50), Box(100, 120, 50, 50)};
  const AugmentResult augmented =
      augment(to_normalized(pattern), boxes, config.augmentation, aug_rng);
  write_png(dir / "augmented.png", to_rgb8(augmented.image));
  atomic_write_text(dir / "trace.jsonl", trace_to_json_line("pattern.png", augmented.trace) + "\n");

  std::cout << "demo artifacts in " << dir.string() << "\n" << format_report_table(report);
}

}  // namespace mitodet::cli
