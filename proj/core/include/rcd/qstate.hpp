// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "rcd/bits.hpp"
#include "rcd/rng.hpp"

namespace rcd::qstate {

/// Amplitude tolerance used for normalization and equality checks.
inline constexpr double kTolerance = 1e-9;
/// Upper bound on the number of branches any single expansion may produce.
inline constexpr std::size_t kMaxBranches = std::size_t{1} << 22;
/// Default wire cap for dense_statevector.
inline constexpr std::size_t kDenseCap = 16;

struct Branch {
  BitString label;
  double amplitude = 0.0;
};

/// Classical function f embedded coherently as |m>|a> -> |m>|a xor f(m)>.
/// Maps with equal `id` are treated as the same function, which is what lets
/// a second application uncompute the first without expanding the register.
struct XorMap {
  std::string id;
  std::size_t out_width = 0;
  std::function<BitString(const BitString&)> fn;
  /// Serialization handle: a resolver rebuilds `fn` from (kind, param).
  std::string kind;
  Bytes param;
};

using MapResolver = std::function<XorMap(const std::string& kind, const Bytes& param,
                                         const std::string& id, std::size_t out_width)>;

namespace detail {

/// A set of wires held as an explicit sparse superposition.
struct BranchFactor {
  std::vector<std::size_t> wires;
  std::vector<Branch> branches;
};

/// Product state over `sources`, extended by target wires holding
/// constant xor f1(m) xor f2(m) ... where m is read from `source_wires`.
struct LazyXorFactor {
  std::vector<BranchFactor> sources;
  std::vector<std::size_t> source_wires;
  std::vector<std::size_t> target_wires;
  BitString constant;
  std::vector<XorMap> maps;
};

using Factor = std::variant<BranchFactor, LazyXorFactor>;

}  // namespace detail

/// Simulated register of `n_wires` qubits with real amplitudes. Internally a
/// tensor product of independent factors; externally a set of
/// (label, amplitude) branches. Values are immutable snapshots: operations
/// return new registers.
class QReg {
 public:
  QReg() = default;

  /// Single explicit factor; rejects duplicate labels, wrong widths and
  /// non-normalized amplitudes.
  static QReg from_branches(std::size_t n_wires, std::vector<Branch> branches);
  /// |bits>.
  static QReg basis_state(const BitString& bits);

  std::size_t n_wires() const noexcept { return n_; }
  std::size_t factor_count() const noexcept { return factors_.size(); }
  /// Number of branches in the full expansion (may exceed kMaxBranches).
  double branch_count() const;

  /// Full expansion sorted by label; TooLarge beyond `cap` branches.
  std::vector<Branch> branches(std::size_t cap = kMaxBranches) const;
  double norm_squared() const;
  bool normalized() const { return std::abs(norm_squared() - 1.0) <= kTolerance; }

  /// Branch-exact comparison after expansion (labels equal, amplitudes within tolerance).
  bool same_state(const QReg& other) const;

  nlohmann::json to_json() const;
  static QReg from_json(const nlohmann::json& j, const MapResolver& resolver = {});

 private:
  friend struct RegAccess;
  std::size_t n_ = 0;
  std::vector<detail::Factor> factors_;
};

struct MeasurementOutcome {
  BitString outcome;
  QReg post_state;
};

/// |x>_theta: wire j is |x_j> when theta_j = 0 and H|x_j> when theta_j = 1.
QReg bb84_prepare(const BitString& x, const BasisString& theta);

/// Measures wires 0..|basis|-1, wire j in the Hadamard basis when basis_j = 1.
/// Remaining wires are left unmeasured.
MeasurementOutcome measure_in_basis(const QReg& reg, const BasisString& basis, Rng& rng);
/// Measures the listed wires (outcome bit k belongs to wires[k]).
MeasurementOutcome measure_wires(const QReg& reg, std::span<const std::size_t> wires,
                                 const BasisString& basis, Rng& rng);
MeasurementOutcome measure_computational(const QReg& reg, Rng& rng);

/// Appends map.out_width fresh |0> wires and XORs f(all original wires) into them.
QReg apply_xor_map(const QReg& reg, const XorMap& map);
/// XORs f(values on `sources`) into `targets` (existing wires).
QReg apply_xor_map(const QReg& reg, const XorMap& map, std::span<const std::size_t> sources,
                   std::span<const std::size_t> targets);

QReg apply_hadamard(const QReg& reg, std::span<const std::size_t> wires);

/// Exact amplitude vector; wire 0 is the most significant index bit.
std::vector<double> dense_statevector(const QReg& reg, std::size_t cap = kDenseCap);

/// Probability distribution over a labelled outcome space.
class Distribution {
 public:
  explicit Distribution(std::string domain = {}) : domain_(std::move(domain)) {}

  void add(const std::string& outcome, double p) { masses_[outcome] += p; }
  double prob(const std::string& outcome) const;
  double total() const;
  const std::string& domain() const noexcept { return domain_; }
  const std::map<std::string, double>& masses() const noexcept { return masses_; }

 private:
  std::string domain_;
  std::map<std::string, double> masses_;
};

/// Exact Born-rule distribution of measuring `wires` in `basis`; outcome keys
/// are bit strings tagged with domain "bits:<count>".
Distribution outcome_distribution(const QReg& reg, std::span<const std::size_t> wires,
                                  const BasisString& basis);
Distribution outcome_distribution(const QReg& reg, const BasisString& basis);

/// 1/2 sum |p - q|; DomainMismatch when the outcome spaces differ.
double distribution_trace_distance(const Distribution& p, const Distribution& q);

}  // namespace rcd::qstate
