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

#include <benchmark/benchmark.h>

#include "mitodet/anchors.hpp"
#include "mitodet/augmentation.hpp"
#include "mitodet/dataset.hpp"
#include "mitodet/evaluation.hpp"
#include "mitodet/postprocess.hpp"
#include "mitodet/rng.hpp"
#include "mitodet/synthetic.hpp"

namespace {

using namespace mitodet;

std::vector<Detection> make_detections(std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<Detection> dets;
  dets.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    dets.push_back({Box(rng.uniform(0.0, 974.0), rng.uniform(0.0, 974.0), 50, 50), rng.uniform(),
                    Label::Mitotic, Frame::Slide});
  }
  return dets;
}

void BM_Iou(benchmark::State& state) {
  const Box a(10.5, 20.25, 50, 50);
  const Box b(30.0, 25.0, 50, 50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(iou(a, b));
  }
}
BENCHMARK(BM_Iou);

void BM_Nms(benchmark::State& state) {
  const auto dets = make_detections(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nms(dets, 0.1));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Nms)->Range(32, 2048)->Complexity();

void BM_TileSlideMetadata(benchmark::State& state) {
  SyntheticDatasetConfig cfg;
  cfg.n_slides = 1;
  cfg.mitotic_per_slide = 16;
  cfg.nonmitotic_per_slide = 8;
  const auto slides = generate_slides(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tile_slide(slides[0], 1024));
  }
}
BENCHMARK(BM_TileSlideMetadata);

void BM_CropTilePixels(benchmark::State& state) {
  const RgbImage slide = generate_test_pattern(2048, 2048, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(crop_padded(slide, 1024, 1024, 1024));
  }
}
BENCHMARK(BM_CropTilePixels);

void BM_Augment(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const ImageBuffer img = to_normalized(generate_test_pattern(side, side, 3));
  const std::vector<Box> boxes{Box(1, 1, side / 4.0, side / 4.0)};
  const AugmentationPolicy policy;
  std::uint64_t call = 0;
  for (auto _ : state) {
    RandomStream rng = StreamKey(11).with(call++).stream();
    benchmark::DoNotOptimize(augment(img, boxes, policy, rng));
  }
}
BENCHMARK(BM_Augment)->Arg(256)->Arg(1024);

void BM_MatchAnchors(benchmark::State& state) {
  const AnchorGrid grid = generate_anchors(1024, static_cast<int>(state.range(0)), 50);
  RandomStream rng(5);
  std::vector<Annotation> gts;
  for (int g = 0; g < 8; ++g) {
    gts.push_back({Box(rng.uniform(0.0, 974.0), rng.uniform(0.0, 974.0), 50, 50), Label::Mitotic,
                   false});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(match_anchors(grid, gts));
  }
}
BENCHMARK(BM_MatchAnchors)->Arg(16)->Arg(8);

void BM_MatchDetections(benchmark::State& state) {
  const auto dets = make_detections(200, 9);
  std::vector<Annotation> gts;
  RandomStream rng(10);
  for (int g = 0; g < 64; ++g) {
    gts.push_back({Box(rng.uniform(0.0, 974.0), rng.uniform(0.0, 974.0), 50, 50), Label::Mitotic,
                   false});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(match_detections(dets, gts, 0.1));
  }
}
BENCHMARK(BM_MatchDetections);

void BM_TuneThreshold(benchmark::State& state) {
  RandomStream rng(12);
  std::vector<ScoredImage> images(8);
  for (ScoredImage& img : images) {
    img.detections = make_detections(40, rng.next_u64());
    for (int g = 0; g < 12; ++g) {
      img.ground_truth.push_back(
          {Box(rng.uniform(0.0, 974.0), rng.uniform(0.0, 974.0), 50, 50), Label::Mitotic, false});
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(tune_threshold(images, 0.1));
  }
}
BENCHMARK(BM_TuneThreshold);

}  // namespace

BENCHMARK_MAIN();
