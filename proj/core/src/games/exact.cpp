// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include <bit>
#include <cmath>
#include <string>

#include "rcd/error.hpp"
#include "rcd/games/games.hpp"

namespace rcd::games {
namespace {

constexpr std::size_t kMaxExactLambda = 8;

std::string bits_of(std::uint32_t v, std::size_t n) {
  std::string s(n, '0');
  for (std::size_t i = 0; i < n; ++i)
    if ((v >> i) & 1U) s[i] = '1';
  return s;
}

/// Enumerates x, theta and the honest measurement outcome. `determined` maps
/// theta to the wires whose outcome equals x_i; the rest are uniform.
/// `parity_set` maps theta to the wires whose x-parity masks b.
template <typename Determined, typename Parity>
qstate::Distribution enumerate(int b, std::size_t lambda, HandleMode mode, const char* tag, const char* handle_field,
                               Determined determined, Parity parity_set) {
  if (b != 0 && b != 1) throw Error(Errc::kParameterError, "b must be 0 or 1");
  if (lambda == 0 || lambda > kMaxExactLambda)
    throw Error(Errc::kParameterError, "exact enumeration supports 1 <= lambda <= 8");
  const std::uint32_t full = (1U << lambda) - 1;
  const double base = std::ldexp(1.0, -2 * static_cast<int>(lambda));
  qstate::Distribution d("residual");
  for (std::uint32_t theta = 0; theta <= full; ++theta) {
    std::uint32_t fixed = determined(theta) & full;
    std::uint32_t free = full & ~fixed;
    double w = base * std::ldexp(1.0, -std::popcount(free));
    std::string prefix = "handle:opaque|";
    for (std::uint32_t x = 0; x <= full; ++x) {
      if (mode == HandleMode::kOpened) {
        int c = b ^ (std::popcount(x & parity_set(theta) & full) & 1);
        prefix = "handle:theta=" + bits_of(theta, lambda) + "," + handle_field + "=" + std::to_string(c) + "|";
      }
      // Walk every subset of the free wires.
      std::uint32_t sub = 0;
      do {
        std::uint32_t out = (x & fixed) | sub;
        d.add(prefix + tag + bits_of(out, lambda), w);
        sub = (sub - free) & free;
      } while (sub != 0);
    }
  }
  return d;
}

}  // namespace

qstate::Distribution exact_ced_residual(SchemeTag scheme, int b, std::size_t lambda, HandleMode mode) {
  switch (scheme) {
    case SchemeTag::kPriVCED:
      // Hadamard measurement: theta = 1 wires reproduce x, mask over theta = 0.
      return enumerate(
          b, lambda, mode, "cert:", "masked", [](std::uint32_t t) { return t; }, [](std::uint32_t t) { return ~t; });
    case SchemeTag::kPubVCED:
      // Computational measurement of the message wires: theta = 0 wires
      // reproduce x, mask over theta = 1.
      return enumerate(
          b, lambda, mode, "cert:", "masked", [](std::uint32_t t) { return ~t; }, [](std::uint32_t t) { return t; });
    default:
      throw Error(Errc::kParameterError, "exact residuals exist for PriVCED and PubVCED only");
  }
}

qstate::Distribution exact_cel_residual(CelVariant, int b, std::size_t lambda, HandleMode mode) {
  // Both variants hand the honest measurer the same message wires; the
  // signature wires are a function of them.
  return enumerate(
      b, lambda, mode, "x':", "beta", [](std::uint32_t t) { return ~t; }, [](std::uint32_t t) { return t; });
}

}  // namespace rcd::games
