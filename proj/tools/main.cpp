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

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "mitodet/error.hpp"

namespace {

// Exit codes: 0 success, 2 usage, 3 missing/unreadable file, 4 schema
// violation, 5 invalid values, 70 unexpected failure.
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitSchema = 4;
constexpr int kExitValidation = 5;
constexpr int kExitInternal = 70;

}  // namespace

int main(int argc, char** argv) {
  using namespace mitodet;
  using namespace mitodet::cli;

  CLI::App app{"mitosis-detection pipeline toolkit"};
  app.require_subcommand(1);

  GlobalOptions global;
  std::uint64_t seed_override = 0;
  app.add_option("--config", global.config_path, "pipeline config file (JSON)")
      ->envname("MITODET_CONFIG");
  auto* seed_opt = app.add_option("--seed", seed_override, "override the config seed");
  // Option values are flushed before subcommand callbacks run, so this
  // resolves the override exactly once per invocation.
  const auto with_seed = [&]() -> const GlobalOptions& {
    if (seed_opt->count() > 0) global.seed = seed_override;
    return global;
  };

  SplitOptions split;
  auto* split_cmd = app.add_subcommand("split", "partition a slide manifest into train/val/test");
  split_cmd->add_option("--manifest", split.manifest, "dataset manifest")->required();
  split_cmd->add_option("--out", split.out, "output plan file")->required();
  split_cmd->add_option("--train", split.n_train, "number of training slides");
  split_cmd->add_option("--val", split.n_val, "number of validation slides");
  split_cmd->add_option("--test", split.n_test, "number of test slides");
  split_cmd->add_flag("--leave-one-scanner-out", split.leave_one_scanner_out,
                      "one fold per scanner instead of a random split");
  split_cmd->callback([&] { run_split(with_seed(), split); });

  TileOptions tile;
  auto* tile_cmd = app.add_subcommand("tile", "cut slides into tiles with reassigned annotations");
  tile_cmd->add_option("--manifest", tile.manifest, "dataset manifest")->required();
  tile_cmd->add_option("--out", tile.out_dir, "output directory")->required();
  tile_cmd->add_option("--tile-size", tile.tile_size, "tile edge in pixels (default from config)");
  tile_cmd->add_flag("--overlap-mode", tile.overlap_mode,
                     "copy annotations into every overlapped tile instead of the center rule");
  tile_cmd->add_flag("--sample-empty", tile.sample_empty,
                     "apply the empty-tile rejection sampling from the config");
  tile_cmd->callback([&] { run_tile(with_seed(), tile); });

  AugmentOptions augment;
  auto* augment_cmd = app.add_subcommand("augment", "apply the augmentation policy to tiles");
  augment_cmd->add_option("--tiles", augment.tiles_manifest, "tiles manifest (with images)")
      ->required();
  augment_cmd->add_option("--out", augment.out_dir, "output directory")->required();
  augment_cmd->add_option("--epoch", augment.epoch, "epoch index feeding the draw streams");
  augment_cmd->callback([&] { run_augment(with_seed(), augment); });

  AnchorsOptions anchors;
  auto* anchors_cmd =
      app.add_subcommand("anchors", "dump anchor grids (and labels, given a ground-truth tile)");
  anchors_cmd->add_option("--out", anchors.out, "output JSON file")->required();
  anchors_cmd->add_option("--tile-size", anchors.tile_size, "tile edge (default from config)");
  anchors_cmd->add_option("--stride", anchors.stride,
                          "single stride to dump (default: every configured level)");
  anchors_cmd->add_option("--tiles", anchors.tiles_manifest, "tiles manifest with ground truth");
  anchors_cmd->add_option("--slide", anchors.slide_id, "slide id of the ground-truth tile");
  anchors_cmd->add_option("--origin-x", anchors.origin_x, "tile origin x");
  anchors_cmd->add_option("--origin-y", anchors.origin_y, "tile origin y");
  anchors_cmd->add_flag("--sample-batch", anchors.sample_batch,
                        "also draw a training minibatch per level");
  anchors_cmd->callback([&] { run_anchors(with_seed(), anchors); });

  ScoreOptions score;
  auto* score_cmd =
      app.add_subcommand("score", "produce detections with the synthetic oracle scorer");
  score_cmd->add_option("--manifest", score.manifest, "dataset manifest");
  score_cmd->add_option("--out", score.out, "output detections CSV")->required();
  score_cmd->add_option("--predictions", score.passthrough,
                        "validate and normalize an existing detections CSV instead");
  score_cmd->add_option("--recall", score.oracle.recall_sim, "oracle: gt emission probability");
  score_cmd->add_option("--fp-rate", score.oracle.fp_rate, "oracle: spurious detections per tile");
  score_cmd->add_option("--jitter", score.oracle.jitter, "oracle: max center displacement (px)");
  score_cmd->add_option("--tp-score-lo", score.oracle.tp_scores.lo, "oracle: min tp score");
  score_cmd->add_option("--tp-score-hi", score.oracle.tp_scores.hi, "oracle: max tp score");
  score_cmd->add_option("--fp-score-lo", score.oracle.fp_scores.lo, "oracle: min fp score");
  score_cmd->add_option("--fp-score-hi", score.oracle.fp_scores.hi, "oracle: max fp score");
  score_cmd->callback([&] {
    if (score.passthrough.empty() && score.manifest.empty()) {
      throw ValidationError("score: either --manifest (oracle) or --predictions (passthrough)");
    }
    run_score(with_seed(), score);
  });

  PostprocessOptions post;
  auto* post_cmd = app.add_subcommand("postprocess", "confidence threshold + per-class NMS");
  post_cmd->add_option("--in", post.in, "input detections CSV")->required();
  post_cmd->add_option("--out", post.out, "output detections CSV")->required();
  post_cmd->add_option("--tau", post.tau, "confidence threshold (default 0)");
  post_cmd->add_option("--nms-iou", post.nms_iou, "NMS IoU threshold (default from config)");
  post_cmd->callback([&] { run_postprocess(with_seed(), post); });

  EvaluateOptionsCli evaluate;
  auto* eval_cmd = app.add_subcommand("evaluate", "score a prediction run against a manifest");
  eval_cmd->add_option("--predictions", evaluate.predictions, "detections CSV")->required();
  eval_cmd->add_option("--manifest", evaluate.manifest, "dataset manifest")->required();
  eval_cmd->add_option("--tau", evaluate.tau, "confidence threshold (default 0)");
  eval_cmd->add_option("--out", evaluate.out, "write the report JSON here");
  eval_cmd->callback([&] { run_evaluate(with_seed(), evaluate); });

  TuneOptions tune;
  auto* tune_cmd =
      app.add_subcommand("tune-threshold", "grid-search the confidence threshold maximizing F1");
  tune_cmd->add_option("--predictions", tune.predictions, "detections CSV")->required();
  tune_cmd->add_option("--manifest", tune.manifest, "dataset manifest")->required();
  tune_cmd->add_option("--out", tune.out, "write the tuning result JSON here");
  tune_cmd->add_option("--pr-curve", tune.pr_curve_out, "write the threshold sweep CSV here");
  tune_cmd->add_flag("--skip-nms", tune.skip_nms, "tune on the raw detections without NMS");
  tune_cmd->callback([&] { run_tune(with_seed(), tune); });

  DemoOptions demo;
  auto* demo_cmd =
      app.add_subcommand("demo", "run the whole pipeline end to end on synthetic fixtures");
  demo_cmd->add_option("--out", demo.out_dir, "output directory")->required();
  demo_cmd->add_option("--slides", demo.n_slides, "synthetic slide count (default 10)");
  demo_cmd->add_option("--recall", demo.oracle_recall, "oracle recall (default 1: zero noise)");
  demo_cmd->add_option("--fp-rate", demo.oracle_fp_rate, "oracle fp rate (default 0)");
  demo_cmd->add_option("--jitter", demo.oracle_jitter, "oracle jitter in px (default 0)");
  demo_cmd->callback([&] { run_demo(with_seed(), demo); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;  // help/version exit cleanly
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ParseError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
