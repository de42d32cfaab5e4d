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

#include "mitodet/rng.hpp"

#include <cmath>

#include "mitodet/error.hpp"

namespace mitodet {

double RandomStream::uniform() {
  // Top 53 bits scaled into [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  if (lo > hi) throw ValidationError("uniform: lo > hi");
  return lo + (hi - lo) * uniform();
}

bool RandomStream::bernoulli(double p) { return uniform() < p; }

std::uint64_t RandomStream::uniform_index(std::uint64_t n) {
  if (n == 0) throw ValidationError("uniform_index: n must be positive");
  // Rejection sampling over the largest multiple of n to avoid modulo bias.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

int RandomStream::poisson(double mean) {
  if (mean < 0.0) throw ValidationError("poisson: mean must be >= 0");
  if (mean == 0.0) return 0;
  const double threshold = std::exp(-mean);
  int k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform();
  } while (p > threshold);
  return k - 1;
}

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

}  // namespace

std::uint64_t StreamKey::mix(std::uint64_t x) {
  // SplitMix64 finalizer (Steele et al.).
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

StreamKey StreamKey::with(std::string_view part) const {
  StreamKey next(*this);
  next.state_ = mix(state_ ^ fnv1a(part));
  return next;
}

StreamKey StreamKey::with(std::uint64_t part) const {
  StreamKey next(*this);
  next.state_ = mix(state_ ^ part);
  return next;
}

}  // namespace mitodet
