// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <concepts>
#include <cstddef>
#include <string>
#include <utility>

#include "rcd/bits.hpp"
#include "rcd/error.hpp"

namespace rcd::io {

inline constexpr std::size_t kMaxGates = std::size_t{1} << 20;

template <typename C>
concept Circuit = requires(const C& c, const typename C::Input& in) {
  typename C::Output;
  { c.serialize() } -> std::convertible_to<Bytes>;
  { c.gate_count() } -> std::convertible_to<std::size_t>;
  { c.evaluate(in) } -> std::same_as<typename C::Output>;
};

/// Reference obfuscation: the circuit itself, plus its serialized form.
template <Circuit C>
class ObfuscatedProgram {
 public:
  using Input = typename C::Input;
  using Output = typename C::Output;

  explicit ObfuscatedProgram(C circuit) : circuit_(std::move(circuit)), description_(circuit_.serialize()) {}

  Output eval(const Input& in) const { return circuit_.evaluate(in); }
  const Bytes& description() const noexcept { return description_; }
  /// Transparent by design; exposed for audits and the simulation harness.
  const C& circuit() const noexcept { return circuit_; }

 private:
  C circuit_;
  Bytes description_;
};

template <Circuit C>
ObfuscatedProgram<C> obfuscate(C circuit, std::size_t max_gates = kMaxGates) {
  if (circuit.gate_count() > max_gates)
    throw Error(Errc::kCircuitTooLarge,
                std::to_string(circuit.gate_count()) + " gates exceed limit " + std::to_string(max_gates));
  return ObfuscatedProgram<C>(std::move(circuit));
}

template <Circuit C>
typename C::Output eval(const ObfuscatedProgram<C>& program, const typename C::Input& in) {
  return program.eval(in);
}

/// Width-w identity, used in tests.
struct IdentityCircuit {
  using Input = BitString;
  using Output = BitString;
  std::size_t width = 0;

  Bytes serialize() const;
  std::size_t gate_count() const noexcept { return width; }
  BitString evaluate(const BitString& in) const;
};

/// Output = input xor mask; two masks give functionally distinct circuits.
struct XorMaskCircuit {
  using Input = BitString;
  using Output = BitString;
  BitString mask;

  Bytes serialize() const;
  std::size_t gate_count() const noexcept { return mask.size(); }
  BitString evaluate(const BitString& in) const { return in ^ mask; }
};

}  // namespace rcd::io
