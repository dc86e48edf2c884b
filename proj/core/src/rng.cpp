// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rcd/rng.hpp"

#include "rcd/error.hpp"

namespace rcd {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw Error(Errc::kParameterError, "Rng::below(0)");
  std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
  return dist(engine_);
}

BitString Rng::bits(std::size_t n) {
  BitString out(n);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0) word = engine_();
    out.set(i, (word >> (i % 64)) & 1);
  }
  return out;
}

Bytes Rng::bytes(std::size_t n) {
  Bytes out(n);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 8 == 0) word = engine_();
    out[i] = static_cast<std::uint8_t>(word >> (8 * (i % 8)));
  }
  return out;
}

}  // namespace rcd
