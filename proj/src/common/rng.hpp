// Copyright 2026 the sensorank authors
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
#include <span>
#include <utility>

namespace sensorank {

/// SplitMix64 finalizer. Used to decorrelate seeds before they reach Pcg32.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Independent sub-stream families. The numeric values are part of the
/// reproducibility contract: changing one changes every generated artifact.
enum class StreamDomain : std::uint64_t {
  kBindingTrial = 1,
  kSameDiffPair = 2,
  kProbeImage = 3,
  kProbeDirections = 4,
  kAnchors = 5,
  kEncoderInit = 6,
  kCovarianceNoise = 7,
  kBagTables = 8,
};

/// PCG-XSH-RR 64/32 (O'Neill 2014). Bit-exact on every platform.
///
/// Stream splitting: `Pcg32::stream(seed, domain, index)` seeds the
/// generator with
///   state0 = splitmix64(splitmix64(seed ^ splitmix64(domain)) + index)
///   inc    = ((domain << 32) ^ index) * 2 + 1
/// so every (seed, domain, index) triple gets its own sequence and the
/// i-th trial can be regenerated without replaying trials 0..i-1.
class Pcg32 {
 public:
  Pcg32(std::uint64_t init_state, std::uint64_t init_seq) noexcept {
    state_ = 0;
    inc_ = (init_seq << 1u) | 1u;
    next_u32();
    state_ += init_state;
    next_u32();
  }

  static Pcg32 stream(std::uint64_t seed, StreamDomain domain, std::uint64_t index) noexcept {
    const auto d = static_cast<std::uint64_t>(domain);
    const std::uint64_t base = splitmix64(seed ^ splitmix64(d));
    return Pcg32(splitmix64(base + index), (d << 32) ^ index);
  }

  std::uint32_t next_u32() noexcept {
    const std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    const auto rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  /// Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint32_t bounded(std::uint32_t bound) noexcept {
    const std::uint32_t threshold = (0u - bound) % bound;
    for (;;) {
      const std::uint32_t r = next_u32();
      if (r >= threshold) return r % bound;
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() noexcept;

  void fill_normal(std::span<double> out, double mean = 0.0, double stddev = 1.0) noexcept {
    for (double& v : out) v = mean + stddev * normal();
  }

  /// Fisher-Yates shuffle driven by `bounded`.
  template <typename T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = bounded(static_cast<std::uint32_t>(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace sensorank
