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

// Acceptance suite: one criterion per function, one PASS/FAIL line per
// criterion, nonzero exit iff anything failed. The end-to-end and
// determinism criteria drive the actual CLI binary (--cli <path>).

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mitodet/anchors.hpp"
#include "mitodet/augmentation.hpp"
#include "mitodet/dataset.hpp"
#include "mitodet/evaluation.hpp"
#include "mitodet/formats.hpp"
#include "mitodet/postprocess.hpp"
#include "mitodet/rng.hpp"
#include "mitodet/synthetic.hpp"

namespace fs = std::filesystem;
using namespace mitodet;

namespace {

std::string g_cli_path;

struct Outcome {
  bool ok = false;
  std::string detail;
};

Outcome pass(std::string detail) { return {true, std::move(detail)}; }
Outcome fail(std::string detail) { return {false, std::move(detail)}; }

// ---------------------------------------------------------------- 1
// compute_prf on counts realizing P = 0.7319, R = 0.6084 returns the
// published F1 = 0.6645 within 5e-5.
Outcome metric_arithmetic() {
  const std::int64_t tp = 3425292, fp = 1254708, fn = 2204708;
  const Prf prf = compute_prf(tp, fp, fn);
  if (prf.precision != 3425292.0 / 4680000.0 || std::abs(prf.precision - 0.7319) > 1e-12) {
    return fail("precision does not realize 0.7319");
  }
  if (std::abs(prf.recall - 0.6084) > 1e-12) return fail("recall does not realize 0.6084");
  const double err = std::abs(prf.f1 - 0.6645);
  if (err >= 5e-5) return fail("f1 " + std::to_string(prf.f1) + " off by " + std::to_string(err));
  return pass("f1 = " + std::to_string(prf.f1) + ", |err| = " + std::to_string(err) + " < 5e-5");
}

// ---------------------------------------------------------------- 2
// A 150-slide synthetic manifest splits 105/15/30 exactly, parts
// disjoint and covering.
Outcome split_cardinalities() {
  SyntheticDatasetConfig cfg;
  cfg.n_slides = 150;
  cfg.mitotic_per_slide = 2;
  cfg.nonmitotic_per_slide = 1;
  cfg.seed = 2026;
  const auto slides = generate_slides(cfg);
  const SplitPlan plan = split_random(slides, 105, 15, 30, 7);

  if (plan.train.size() != 105 || plan.validation.size() != 15 || plan.test.size() != 30) {
    return fail("cardinalities are not 105/15/30");
  }
  std::set<std::string> seen;
  for (const auto* part : {&plan.train, &plan.validation, &plan.test}) {
    for (const std::string& id : *part) {
      if (!seen.insert(id).second) return fail("parts overlap on " + id);
    }
  }
  if (seen.size() != 150) return fail("parts do not cover the slide set");
  for (const SlideRecord& s : slides) {
    if (!seen.count(s.slide_id)) return fail("slide missing from the partition: " + s.slide_id);
  }
  return pass("105/15/30, disjoint, covering");
}

// ---------------------------------------------------------------- 3
// Tile counts for dims in [5000,7000]^2 fall in [25,49]; dims matching
// the modal grid shapes fall in [35,48].
Outcome tile_count_consistency() {
  RandomStream rng(303);
  auto count_tiles = [](int w, int h) {
    SlideRecord s;
    s.slide_id = "s";
    s.scanner_id = "x";
    s.width = w;
    s.height = h;
    return tile_slide(s, 1024).size();
  };

  for (int i = 0; i < 1000; ++i) {
    const int w = 5000 + static_cast<int>(rng.uniform_index(2001));
    const int h = 5000 + static_cast<int>(rng.uniform_index(2001));
    const std::size_t n = count_tiles(w, h);
    if (n < 25 || n > 49) {
      return fail("dims " + std::to_string(w) + "x" + std::to_string(h) + " gave " +
                  std::to_string(n) + " tiles");
    }
  }

  // Modal shapes: the grids whose products land in the 35-48 band,
  // sampled from the ceil-preimage of each grid dimension.
  const std::pair<int, int> grids[] = {{5, 7}, {7, 5}, {6, 6}, {6, 7}, {7, 6}};
  auto dim_for = [&rng](int cells) {
    if (cells == 5) return 5000 + static_cast<int>(rng.uniform_index(121));   // [5000, 5120]
    if (cells == 6) return 5121 + static_cast<int>(rng.uniform_index(1024));  // [5121, 6144]
    return 6145 + static_cast<int>(rng.uniform_index(856));                   // [6145, 7000]
  };
  for (int i = 0; i < 1000; ++i) {
    const auto [gx, gy] = grids[rng.uniform_index(5)];
    const std::size_t n = count_tiles(dim_for(gx), dim_for(gy));
    if (n < 35 || n > 48) return fail("modal dims gave " + std::to_string(n) + " tiles");
  }
  return pass("1000 uniform dims in [25,49]; 1000 modal dims in [35,48]");
}

// ---------------------------------------------------------------- 4
// Greedy NMS equals a brute-force pairwise-suppression reference on
// 1000 random instances at thresholds {0.1, 0.5, 0.9}.
std::vector<Detection> nms_bruteforce(const std::vector<Detection>& dets, double threshold) {
  std::vector<bool> alive(dets.size(), true);
  std::vector<Detection> kept;
  while (true) {
    std::size_t best = dets.size();
    for (std::size_t i = 0; i < dets.size(); ++i) {
      if (alive[i] && (best == dets.size() || dets[i].score > dets[best].score)) best = i;
    }
    if (best == dets.size()) break;
    alive[best] = false;
    kept.push_back(dets[best]);
    for (std::size_t i = 0; i < dets.size(); ++i) {
      if (alive[i] && dets[i].label == dets[best].label &&
          iou(dets[i].box, dets[best].box) >= threshold) {
        alive[i] = false;
      }
    }
  }
  return kept;
}

Outcome nms_oracle_equivalence() {
  RandomStream rng(304);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Detection> dets;
    const int n = static_cast<int>(rng.uniform_index(51));
    for (int i = 0; i < n; ++i) {
      const double w = rng.uniform(5.0, 90.0);
      const double h = rng.uniform(5.0, 90.0);
      const double score = trial % 3 == 0 ? rng.uniform_index(8) / 7.0 : rng.uniform();
      dets.push_back({Box(rng.uniform(0.0, 256.0 - w), rng.uniform(0.0, 256.0 - h), w, h), score,
                      rng.bernoulli(0.8) ? Label::Mitotic : Label::NonMitotic, Frame::Slide});
    }
    for (const double threshold : {0.1, 0.5, 0.9}) {
      if (nms(dets, threshold) != nms_bruteforce(dets, threshold)) {
        return fail("divergence at trial " + std::to_string(trial) + ", threshold " +
                    std::to_string(threshold));
      }
    }
  }
  return pass("1000 instances x 3 thresholds, exact equality");
}

// ---------------------------------------------------------------- 5
// tune_threshold is at least as good as a dense 1001-point scan, and
// equal whenever the scan hits the observed scores.
Outcome threshold_search_optimality() {
  RandomStream rng(305);
  for (int trial = 0; trial < 200; ++trial) {
    const bool on_grid = trial % 2 == 0;
    std::vector<ScoredImage> images;
    const int n_images = 1 + static_cast<int>(rng.uniform_index(4));
    for (int i = 0; i < n_images; ++i) {
      ScoredImage img;
      const int n_gt = static_cast<int>(rng.uniform_index(7));
      for (int g = 0; g < n_gt; ++g) {
        img.ground_truth.push_back(
            {Box(rng.uniform(0.0, 950.0), rng.uniform(0.0, 950.0), 50, 50), Label::Mitotic, false});
      }
      const int n_det = static_cast<int>(rng.uniform_index(16));
      for (int d = 0; d < n_det; ++d) {
        double x, y;
        if (!img.ground_truth.empty() && rng.bernoulli(0.5)) {
          const Box& t = img.ground_truth[rng.uniform_index(img.ground_truth.size())].box;
          x = t.x() + rng.uniform(-25.0, 25.0);
          y = t.y() + rng.uniform(-25.0, 25.0);
        } else {
          x = rng.uniform(0.0, 950.0);
          y = rng.uniform(0.0, 950.0);
        }
        const double score = on_grid ? rng.uniform_index(1001) / 1000.0 : rng.uniform();
        img.detections.push_back({Box(x, y, 50, 50), score, Label::Mitotic, Frame::Slide});
      }
      images.push_back(std::move(img));
    }

    bool any = false;
    for (const ScoredImage& img : images) any |= !img.detections.empty();
    if (!any) continue;

    const TuneResult tuned = tune_threshold(images, 0.1);
    double dense_best = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double tau = i / 1000.0;
      std::int64_t tp = 0, fp = 0, fn = 0;
      for (const ScoredImage& img : images) {
        const MatchResult m =
            match_detections(apply_threshold(img.detections, tau), img.ground_truth, 0.1);
        tp += m.tp;
        fp += m.fp;
        fn += m.fn;
      }
      dense_best = std::max(dense_best, compute_prf(tp, fp, fn).f1);
    }
    if (tuned.report.f1 < dense_best) {
      return fail("dense scan beat the grid search at trial " + std::to_string(trial));
    }
    if (on_grid && tuned.report.f1 != dense_best) {
      return fail("on-grid scores but tuned f1 != dense f1 at trial " + std::to_string(trial));
    }
  }
  return pass("200 instances: tuned >= dense scan, equal on grid-aligned scores");
}

// ---------------------------------------------------------------- 6
// Augmentation activation statistics, bit-exact zero-parameter
// identities, HSV round-trip.
Outcome augmentation_statistics() {
  ImageBuffer img = ImageBuffer::zeros(4, 4);
  {
    RandomStream fill(306);
    for (float& v : img.values) v = static_cast<float>(fill.uniform());
  }

  const AugmentationPolicy policy;
  RandomStream rng(307);
  const int n = 10000;
  int counts[4] = {0, 0, 0, 0};
  int unflipped = 0;
  const std::vector<Box> boxes{Box(0, 0, 2, 2)};
  for (int i = 0; i < n; ++i) {
    const AugmentResult r = augment(img, boxes, policy, rng);
    counts[0] += r.trace.brightness.active;
    counts[1] += r.trace.hue.active;
    counts[2] += r.trace.contrast.active;
    counts[3] += r.trace.saturation.active;
    unflipped += !r.trace.flip_horizontal && !r.trace.flip_vertical;
  }
  const char* names[] = {"brightness", "hue", "contrast", "saturation"};
  std::string freqs;
  for (int op = 0; op < 4; ++op) {
    const double f = counts[op] / static_cast<double>(n);
    if (std::abs(f - 0.2) > 0.012) {
      return fail(std::string(names[op]) + " activation " + std::to_string(f) +
                  " outside 0.2 +- 0.012");
    }
    freqs += std::to_string(f).substr(0, 6) + " ";
  }
  const double unflipped_f = unflipped / static_cast<double>(n);
  if (std::abs(unflipped_f - 0.25) > 0.013) {
    return fail("flip-unchanged " + std::to_string(unflipped_f) + " outside 0.25 +- 0.013");
  }

  if (adjust_brightness(img, 0.0) != img) return fail("brightness(0) not bit-exact");
  if (adjust_hue(img, 0.0) != img) return fail("hue(0) not bit-exact");
  if (adjust_contrast(img, 0.0) != img) return fail("contrast(0) not bit-exact");
  if (adjust_saturation(img, 0.0) != img) return fail("saturation(0) not bit-exact");

  for (int ri = 0; ri < 64; ++ri) {
    for (int gi = 0; gi < 64; ++gi) {
      for (int bi = 0; bi < 64; ++bi) {
        const double r = ri / 63.0, g = gi / 63.0, b = bi / 63.0;
        double h, s, v, r2, g2, b2;
        rgb_to_hsv(r, g, b, h, s, v);
        hsv_to_rgb(h, s, v, r2, g2, b2);
        if (std::abs(r - r2) > 1.0 / 255.0 || std::abs(g - g2) > 1.0 / 255.0 ||
            std::abs(b - b2) > 1.0 / 255.0) {
          return fail("hsv round-trip beyond 1/255 at cube point");
        }
      }
    }
  }
  return pass("activations " + freqs + "unflipped " + std::to_string(unflipped_f).substr(0, 6) +
              "; identities bit-exact; 64^3 hsv round-trip ok");
}

// ---------------------------------------------------------------- 7
// Empty-tile rejection sampling at drop_prob 0.8.
Outcome rejection_sampling() {
  std::vector<Tile> tiles(10000);
  RandomStream rng(308);
  const auto kept = sample_training_tiles(tiles, 0.8, rng);
  if (kept.size() < 1880 || kept.size() > 2120) {
    return fail("kept " + std::to_string(kept.size()) + " of 10000 empties, outside 2000 +- 120");
  }

  Tile occupied;
  occupied.annotations.push_back({Box(0, 0, 50, 50), Label::Mitotic, false});
  std::vector<Tile> mixed(5000);
  for (std::size_t i = 0; i < mixed.size(); i += 2) mixed[i] = occupied;
  RandomStream rng2(309);
  const auto kept_mixed = sample_training_tiles(mixed, 1.0, rng2);
  if (kept_mixed.size() != 2500) return fail("a non-empty tile was dropped");
  for (const Tile& t : kept_mixed) {
    if (t.annotations.empty()) return fail("an empty tile survived drop_prob 1");
  }
  return pass("kept " + std::to_string(kept.size()) + "/10000 empties; non-empty always kept");
}

// ---------------------------------------------------------------- 8
// Anchor machinery: grid shape, forced positives on random layouts,
// minibatch quotas.
Outcome anchor_machinery() {
  const AnchorGrid grid = generate_anchors(1024, 16, 50);
  if (grid.anchors.size() != 4096) {
    return fail("grid has " + std::to_string(grid.anchors.size()) + " anchors, expected 4096");
  }
  for (const Box& a : grid.anchors) {
    if (a.w() != a.h() || a.w() != 50.0) return fail("non-square or off-scale anchor");
  }

  RandomStream rng(310);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Annotation> gts;
    const int n_gt = 1 + static_cast<int>(rng.uniform_index(8));
    for (int g = 0; g < n_gt; ++g) {
      gts.push_back({Box(rng.uniform(0.0, 974.0), rng.uniform(0.0, 974.0), 50, 50),
                     Label::Mitotic, false});
    }
    const AnchorLabels labels = match_anchors(grid, gts);

    for (int g = 0; g < n_gt; ++g) {
      double best = 0.0;
      std::size_t best_a = 0;
      for (std::size_t a = 0; a < grid.anchors.size(); ++a) {
        const double v = iou(grid.anchors[a], gts[g].box);
        if (v > best) {
          best = v;
          best_a = a;
        }
      }
      if (labels.labels[best_a] != AnchorLabel::Positive) {
        return fail("gt without a positive anchor at trial " + std::to_string(trial));
      }
    }

    RandomStream batch_rng(1000 + trial);
    const auto batch = sample_minibatch(labels, 256, 0.25, batch_rng);
    std::size_t pos = 0;
    for (const SampledAnchor& s : batch) {
      if (labels.labels[s.index] == AnchorLabel::Ignore) return fail("ignore anchor sampled");
      pos += s.label == AnchorLabel::Positive;
    }
    if (pos > 64) return fail("batch holds " + std::to_string(pos) + " positives > 64");
  }
  return pass("4096 square anchors; 500 layouts forced-positive; batches within quota");
}

// ---------------------------------------------------------------- 9/10
// CLI-driven criteria.
int run_cli(const std::string& args) {
  const std::string cmd = g_cli_path + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

Outcome end_to_end_identity() {
  if (g_cli_path.empty()) return fail("no --cli path given");
  const fs::path dir = fs::temp_directory_path() / ("mitodet_acc9_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  if (run_cli("demo --out " + dir.string()) != 0) return fail("demo exited nonzero");
  const EvalReport report = load_report(dir / "report.json");
  fs::remove_all(dir);
  if (report.f1 != 1.0) return fail("zero-noise demo f1 = " + std::to_string(report.f1));
  if (report.fp != 0 || report.fn != 0) return fail("zero-noise demo has fp/fn");
  return pass("demo report.json f1 == 1.0 exactly (tp=" + std::to_string(report.tp) + ")");
}

Outcome determinism() {
  if (g_cli_path.empty()) return fail("no --cli path given");
  const std::string pid = std::to_string(::getpid());
  const fs::path dir_a = fs::temp_directory_path() / ("mitodet_acc10a_" + pid);
  const fs::path dir_b = fs::temp_directory_path() / ("mitodet_acc10b_" + pid);
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  // Mildly noisy oracle so the draw streams are genuinely exercised.
  const std::string args = "--seed 4242 demo --recall 0.8 --fp-rate 1.0 --jitter 2 --out ";
  if (run_cli(args + dir_a.string()) != 0) return fail("first run exited nonzero");
  if (run_cli(args + dir_b.string()) != 0) return fail("second run exited nonzero");

  std::map<std::string, fs::path> files_a, files_b;
  for (const auto& entry : fs::recursive_directory_iterator(dir_a)) {
    if (entry.is_regular_file()) files_a[fs::relative(entry.path(), dir_a).string()] = entry.path();
  }
  for (const auto& entry : fs::recursive_directory_iterator(dir_b)) {
    if (entry.is_regular_file()) files_b[fs::relative(entry.path(), dir_b).string()] = entry.path();
  }

  Outcome outcome = pass(std::to_string(files_a.size()) + " artifacts byte-identical across runs");
  if (files_a.size() != files_b.size()) {
    outcome = fail("runs produced different artifact sets");
  } else {
    for (const auto& [rel, path_a] : files_a) {
      if (!files_b.count(rel)) {
        outcome = fail("artifact missing in second run: " + rel);
        break;
      }
      std::ifstream a(path_a, std::ios::binary), b(files_b.at(rel), std::ios::binary);
      std::stringstream sa, sb;
      sa << a.rdbuf();
      sb << b.rdbuf();
      if (sa.str() != sb.str()) {
        outcome = fail("artifact differs between runs: " + rel);
        break;
      }
    }
  }
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  return outcome;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--cli") g_cli_path = argv[i + 1];
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"metric-arithmetic", metric_arithmetic},
      {"split-cardinalities", split_cardinalities},
      {"tile-count-consistency", tile_count_consistency},
      {"nms-oracle-equivalence", nms_oracle_equivalence},
      {"threshold-search-optimality", threshold_search_optimality},
      {"augmentation-statistics", augmentation_statistics},
      {"rejection-sampling", rejection_sampling},
      {"anchor-machinery", anchor_machinery},
      {"end-to-end-identity", end_to_end_identity},
      {"determinism", determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = fail(std::string("exception: ") + e.what());
    }
    failures += !outcome.ok;
    std::cout << (outcome.ok ? "PASS" : "FAIL") << "  " << (i + 1) << "  " << criteria[i].first
              << "  --  " << outcome.detail << "\n";
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << "\n";
  return failures == 0 ? 0 : 1;
}
