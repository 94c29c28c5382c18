//
// Copyright 2026 the dplang authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPLANG_RANDOM_HPP_
#define DPLANG_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace dplang {

// Published mixing constant for seed derivation (splitmix64 golden gamma).
inline constexpr std::uint64_t kSeedGamma = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer.
inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += kSeedGamma;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Derives the seed of an individual trial stream from (master seed,
// stream/grid index, trial index). Trials never share a stream.
inline std::uint64_t MixSeed(std::uint64_t master, std::uint64_t stream,
                             std::uint64_t trial) {
  std::uint64_t s = SplitMix64(master + kSeedGamma * (stream + 1));
  return SplitMix64(s + kSeedGamma * (trial + 1));
}

// Deterministic random stream. All variate transforms are hand-rolled on
// top of the (standardized) mt19937_64 raw output so that sequences are
// bit-reproducible across platforms; std::*_distribution is not.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(SplitMix64(seed)) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double NextUniform() {
    return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound); bound >= 1. Multiply-high reduction;
  // exact for power-of-two bounds, bias below 2^-64 per value otherwise.
  std::uint64_t NextBelow(std::uint64_t bound) {
    using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((u128(NextU64()) * u128(bound)) >> 64);
  }

  // Zero-mean normal variate via Box-Muller; consumes exactly two uniforms
  // per call (the second variate is discarded, never cached).
  double NextGaussian(double sigma);

 private:
  std::mt19937_64 engine_;
};

}  // namespace dplang

#endif  // DPLANG_RANDOM_HPP_
