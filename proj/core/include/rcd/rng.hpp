// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

#include "rcd/bits.hpp"

namespace rcd {

/// Seeded randomness source. Every random choice in the library flows through
/// one of these, so a seed fully determines keys, ciphertexts, measurement
/// outcomes and game transcripts.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }
  bool bit() { return (engine_() >> 63) != 0; }
  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);

  BitString bits(std::size_t n);
  Bytes bytes(std::size_t n);

  /// Independent child stream; advances this stream by one draw.
  Rng fork() { return Rng(mix(engine_() ^ 0xa0761d6478bd642fULL)); }

  static std::uint64_t mix(std::uint64_t x) noexcept {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace rcd
