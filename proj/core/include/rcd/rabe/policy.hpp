// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rcd/bits.hpp"
#include "rcd/rng.hpp"

namespace rcd::rabe {

/// Boolean formula over attribute bits. Text form: "x0 & (x1 | !x3)",
/// "true", "false". Immutable; copies share the tree.
class Policy {
 public:
  enum class Op { kConst, kVar, kNot, kAnd, kOr };
  struct Node;  // opaque tree node

  Policy();  // constant true
  static Policy constant(bool value);
  static Policy var(std::size_t index);
  static Policy negate(Policy p);
  static Policy conj(Policy a, Policy b);
  static Policy disj(Policy a, Policy b);

  static Policy parse(std::string_view text);
  static Policy from_json(const nlohmann::json& j);
  static Policy deserialize(BytesView in);

  Op op() const noexcept;
  /// Evaluates on X; WidthMismatch if a variable indexes past |X|.
  bool eval(const BitString& x) const;
  /// Leaves have depth 0; every operator adds one.
  std::size_t depth() const noexcept;
  /// One past the largest variable index (0 when there are none).
  std::size_t width_needed() const noexcept;

  std::string to_string() const;
  nlohmann::json to_json() const;
  Bytes serialize() const;

  friend bool operator==(const Policy& a, const Policy& b) { return a.serialize() == b.serialize(); }

 private:
  explicit Policy(std::shared_ptr<const Node> n) : root_(std::move(n)) {}
  std::shared_ptr<const Node> root_;
};

bool policy_eval(const Policy& p, const BitString& x);

/// Random formula of depth at most `depth` over `tau` variables.
Policy random_policy(std::size_t tau, std::size_t depth, Rng& rng);
/// Random formula made true on `x` (negated when the draw rejects x).
Policy random_policy_satisfied_by(const BitString& x, std::size_t depth, Rng& rng);
/// Random formula made false on `x`.
Policy random_policy_rejecting(const BitString& x, std::size_t depth, Rng& rng);

}  // namespace rcd::rabe
