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
#include <random>
#include <string_view>

namespace mitodet {

/// Seeded random stream with fully pinned draw semantics.
///
/// The engine is std::mt19937_64 (bit-exact everywhere by the standard);
/// all distributions are implemented here rather than via <random>
/// distribution classes, whose output is implementation-defined. Two
/// streams built from the same seed produce identical draw sequences on
/// any platform, which is what makes pipeline artifacts reproducible
/// byte for byte.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1), 53 bits of entropy.
  double uniform();

  /// Uniform double in [lo, hi). Requires lo <= hi.
  double uniform(double lo, double hi);

  /// True with probability p (one uniform draw).
  bool bernoulli(double p);

  /// Unbiased uniform integer in [0, n). Requires n > 0.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Poisson draw via inverse-CDF multiplication; suitable for the small
  /// means used by the oracle scorer.
  int poisson(double mean);

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Derives child seeds by folding context into a root seed, so per-tile
/// or per-epoch streams do not depend on iteration order.
///
/// Contract used across the pipeline: the stream for a tile is
/// `StreamKey(global_seed).with(purpose).with(slide_id).with(origin_x)
///  .with(origin_y).with(epoch).stream()`.
class StreamKey {
 public:
  explicit StreamKey(std::uint64_t root_seed) : state_(mix(root_seed)) {}

  StreamKey with(std::string_view part) const;
  StreamKey with(std::uint64_t part) const;
  StreamKey with(std::int64_t part) const { return with(static_cast<std::uint64_t>(part)); }
  StreamKey with(int part) const { return with(static_cast<std::uint64_t>(static_cast<std::int64_t>(part))); }

  std::uint64_t seed() const { return state_; }
  RandomStream stream() const { return RandomStream(state_); }

  /// SplitMix64 finalizer; also usable as a standalone integer mixer.
  static std::uint64_t mix(std::uint64_t x);

 private:
  std::uint64_t state_;
};

}  // namespace mitodet
