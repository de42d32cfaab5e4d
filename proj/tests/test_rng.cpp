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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "mitodet/error.hpp"
#include "mitodet/rng.hpp"

using namespace mitodet;

TEST_CASE("same seed reproduces the draw sequence") {
  RandomStream a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.uniform() == b.uniform());
  }
}

TEST_CASE("uniform stays in [0,1)") {
  RandomStream rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("ranged uniform stays in [lo,hi)") {
  RandomStream rng(2);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform(-0.2, 0.2);
    CHECK(u >= -0.2);
    CHECK(u < 0.2);
  }
  CHECK_THROWS_AS(rng.uniform(1.0, 0.0), ValidationError);
}

TEST_CASE("uniform_index covers its range without bias artifacts") {
  RandomStream rng(3);
  int counts[5] = {0, 0, 0, 0, 0};
  const int n = 50000;
  for (int i = 0; i < n; ++i) counts[rng.uniform_index(5)]++;
  for (int c : counts) {
    // 5 sigma around n/5 for a binomial(n, 1/5)
    const double sigma = std::sqrt(n * 0.2 * 0.8);
    CHECK(std::abs(c - n / 5.0) < 5 * sigma);
  }
  CHECK_THROWS_AS(rng.uniform_index(0), ValidationError);
}

TEST_CASE("poisson mean matches its parameter") {
  RandomStream rng(4);
  const double lambda = 1.5;
  const int n = 20000;
  long total = 0;
  for (int i = 0; i < n; ++i) total += rng.poisson(lambda);
  const double mean = static_cast<double>(total) / n;
  // 5 sigma of the sample mean: sqrt(lambda / n)
  CHECK(std::abs(mean - lambda) < 5 * std::sqrt(lambda / n));
  CHECK(rng.poisson(0.0) == 0);
  CHECK_THROWS_AS(rng.poisson(-1.0), ValidationError);
}

TEST_CASE("stream keys split independently of derivation order") {
  const StreamKey root(7);
  CHECK(root.with("a").seed() == root.with("a").seed());
  CHECK(root.with("a").seed() != root.with("b").seed());
  CHECK(root.with("a").with(1).seed() != root.with("a").with(2).seed());
  CHECK(root.with(std::uint64_t{1}).seed() != StreamKey(8).with(std::uint64_t{1}).seed());

  // No collisions across a realistic tile-key population.
  std::set<std::uint64_t> seen;
  for (int slide = 0; slide < 20; ++slide) {
    for (int ox = 0; ox < 7; ++ox) {
      for (int oy = 0; oy < 7; ++oy) {
        seen.insert(root.with("slide_" + std::to_string(slide)).with(ox * 1024).with(oy * 1024).seed());
      }
    }
  }
  CHECK(seen.size() == 20u * 7 * 7);
}
