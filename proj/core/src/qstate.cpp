// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rcd/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

#include "rcd/error.hpp"

namespace rcd::qstate {

using detail::BranchFactor;
using detail::Factor;
using detail::LazyXorFactor;

struct RegAccess {
  static std::vector<Factor>& factors(QReg& r) { return r.factors_; }
  static const std::vector<Factor>& factors(const QReg& r) { return r.factors_; }
  static std::size_t& n(QReg& r) { return r.n_; }
};

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
constexpr double kDropBelow = 1e-14;

std::vector<std::size_t> wires_of(const Factor& f) {
  if (const auto* b = std::get_if<BranchFactor>(&f)) return b->wires;
  const auto& lazy = std::get<LazyXorFactor>(f);
  std::vector<std::size_t> out;
  for (const auto& s : lazy.sources) out.insert(out.end(), s.wires.begin(), s.wires.end());
  out.insert(out.end(), lazy.target_wires.begin(), lazy.target_wires.end());
  return out;
}

std::vector<std::size_t> owners(const QReg& reg) {
  std::vector<std::size_t> owner(reg.n_wires(), SIZE_MAX);
  const auto& fs = RegAccess::factors(reg);
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (auto w : wires_of(fs[i])) owner[w] = i;
  return owner;
}

std::size_t position_of(const std::vector<std::size_t>& wires, std::size_t w) {
  auto it = std::find(wires.begin(), wires.end(), w);
  return static_cast<std::size_t>(it - wires.begin());
}

bool contains(const std::vector<std::size_t>& v, std::size_t w) {
  return std::find(v.begin(), v.end(), w) != v.end();
}

BranchFactor tensor(const BranchFactor& a, const BranchFactor& b) {
  if (static_cast<double>(a.branches.size()) * static_cast<double>(b.branches.size()) >
      static_cast<double>(kMaxBranches))
    throw Error(Errc::kTooLarge, "branch expansion exceeds kMaxBranches");
  BranchFactor out;
  out.wires = a.wires;
  out.wires.insert(out.wires.end(), b.wires.begin(), b.wires.end());
  out.branches.reserve(a.branches.size() * b.branches.size());
  for (const auto& x : a.branches)
    for (const auto& y : b.branches) out.branches.push_back({concat(x.label, y.label), x.amplitude * y.amplitude});
  return out;
}

BitString read_positions(const BitString& label, const std::vector<std::size_t>& positions) {
  BitString out(positions.size());
  for (std::size_t k = 0; k < positions.size(); ++k) out.set(k, label[positions[k]]);
  return out;
}

BitString evaluate_map(const XorMap& map, const BitString& input) {
  BitString out = map.fn(input);
  if (out.size() != map.out_width)
    throw Error(Errc::kWidthMismatch, "map '" + map.id + "' produced " + std::to_string(out.size()) +
                                          " bits, declared " + std::to_string(map.out_width));
  return out;
}

BitString lazy_target_value(const LazyXorFactor& lazy, const BitString& m) {
  BitString value = lazy.constant;
  for (const auto& map : lazy.maps) value ^= evaluate_map(map, m);
  return value;
}

BranchFactor materialize(const Factor& f) {
  if (const auto* b = std::get_if<BranchFactor>(&f)) return *b;
  const auto& lazy = std::get<LazyXorFactor>(f);
  BranchFactor src;
  src.branches.push_back({BitString(), 1.0});
  for (const auto& s : lazy.sources) src = tensor(src, s);
  std::vector<std::size_t> pos;
  for (auto w : lazy.source_wires) pos.push_back(position_of(src.wires, w));
  BranchFactor out;
  out.wires = src.wires;
  out.wires.insert(out.wires.end(), lazy.target_wires.begin(), lazy.target_wires.end());
  out.branches.reserve(src.branches.size());
  for (auto& br : src.branches) {
    BitString target = lazy_target_value(lazy, read_positions(br.label, pos));
    out.branches.push_back({concat(br.label, target), br.amplitude});
  }
  return out;
}

void hadamard_local(BranchFactor& f, std::size_t pos) {
  std::unordered_map<BitString, double, BitStringHash> acc;
  acc.reserve(f.branches.size() * 2);
  std::vector<BitString> order;
  for (const auto& br : f.branches) {
    BitString l0 = br.label;
    l0.set(pos, false);
    BitString l1 = br.label;
    l1.set(pos, true);
    double a = br.amplitude * kInvSqrt2;
    double sign = br.label[pos] ? -1.0 : 1.0;
    for (auto* entry : {&l0, &l1}) {
      if (acc.find(*entry) == acc.end()) order.push_back(*entry);
    }
    acc[l0] += a;
    acc[l1] += sign * a;
  }
  f.branches.clear();
  for (auto& label : order) {
    double amp = acc[label];
    if (std::abs(amp) > kDropBelow) f.branches.push_back({std::move(label), amp});
  }
}

bool is_definite(const BranchFactor& f, std::size_t pos) {
  if (f.branches.empty()) return true;
  bool v = f.branches.front().label[pos];
  return std::all_of(f.branches.begin(), f.branches.end(), [&](const Branch& b) { return b.label[pos] == v; });
}

std::map<BitString, double> marginal(const BranchFactor& f, const std::vector<std::size_t>& positions) {
  std::map<BitString, double> out;
  for (const auto& br : f.branches) out[read_positions(br.label, positions)] += br.amplitude * br.amplitude;
  return out;
}

BitString sample(const std::map<BitString, double>& dist, Rng& rng) {
  double total = 0.0;
  for (const auto& [k, p] : dist) total += p;
  double u = rng.uniform01() * total;
  double acc = 0.0;
  const BitString* last = nullptr;
  for (const auto& [k, p] : dist) {
    if (p <= 0.0) continue;
    acc += p;
    last = &k;
    if (u < acc) return k;
  }
  if (last == nullptr) throw Error(Errc::kDomainMismatch, "sampling from an empty distribution");
  return *last;
}

BranchFactor single_wire(std::size_t wire, bool value, bool hadamard) {
  BranchFactor f;
  f.wires = {wire};
  if (!hadamard) {
    f.branches.push_back({BitString{value ? 1 : 0}, 1.0});
  } else {
    f.branches.push_back({BitString{0}, kInvSqrt2});
    f.branches.push_back({BitString{1}, value ? -kInvSqrt2 : kInvSqrt2});
  }
  return f;
}

/// Measures `positions` of `f` (basis bit per position), returns the outcome
/// and appends the resulting factors (measured wires split out) to `out`.
BitString measure_branch_factor(BranchFactor f, const std::vector<std::size_t>& positions,
                                const std::vector<bool>& hadamard, Rng& rng, std::vector<Factor>& out) {
  for (std::size_t k = 0; k < positions.size(); ++k)
    if (hadamard[k]) hadamard_local(f, positions[k]);
  auto dist = marginal(f, positions);
  BitString outcome = sample(dist, rng);
  double p = dist[outcome];
  double scale = 1.0 / std::sqrt(p);

  std::vector<bool> measured(f.wires.size(), false);
  for (auto pos : positions) measured[pos] = true;
  BranchFactor rest;
  for (std::size_t i = 0; i < f.wires.size(); ++i)
    if (!measured[i]) rest.wires.push_back(f.wires[i]);
  for (auto& br : f.branches) {
    if (read_positions(br.label, positions) != outcome) continue;
    BitString label;
    for (std::size_t i = 0; i < f.wires.size(); ++i)
      if (!measured[i]) label.push_back(br.label[i]);
    rest.branches.push_back({std::move(label), br.amplitude * scale});
  }
  double phase = 1.0;
  if (!rest.wires.empty()) {
    out.emplace_back(std::move(rest));
  } else if (!rest.branches.empty() && rest.branches.front().amplitude < 0) {
    phase = -1.0;
  }
  // Computational outcomes stay together as one classical factor.
  BranchFactor classical;
  classical.branches.push_back({BitString(), phase});
  for (std::size_t k = 0; k < positions.size(); ++k) {
    if (hadamard[k]) continue;
    classical.wires.push_back(f.wires[positions[k]]);
    classical.branches.front().label.push_back(outcome[k]);
  }
  bool phase_placed = false;
  if (!classical.wires.empty()) {
    out.emplace_back(std::move(classical));
    phase_placed = true;
  }
  for (std::size_t k = 0; k < positions.size(); ++k) {
    if (!hadamard[k]) continue;
    auto piece = single_wire(f.wires[positions[k]], outcome[k], true);
    if (!phase_placed)
      for (auto& br : piece.branches) br.amplitude *= phase;
    phase_placed = true;
    out.emplace_back(std::move(piece));
  }
  return outcome;
}

/// Position of each listed wire, by wire number.
class WireIndex {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  explicit WireIndex(const std::vector<std::size_t>& wires) {
    std::size_t top = 0;
    for (auto w : wires) top = std::max(top, w + 1);
    pos_.assign(top, npos);
    for (std::size_t k = 0; k < wires.size(); ++k) pos_[wires[k]] = k;
  }
  bool has(std::size_t w) const { return w < pos_.size() && pos_[w] != npos; }
  std::size_t at(std::size_t w) const { return has(w) ? pos_[w] : npos; }

 private:
  std::vector<std::size_t> pos_;
};

/// Splits single-branch factors that mix `wires` with other wires into the
/// two parts, so the listed wires never share a factor with anything else.
void isolate_wires(std::vector<Factor>& fs, const WireIndex& wires) {
  std::vector<Factor> out;
  out.reserve(fs.size());
  for (auto& f : fs) {
    auto* b = std::get_if<BranchFactor>(&f);
    if (b == nullptr || b->branches.size() != 1 || b->wires.size() < 2) {
      out.push_back(std::move(f));
      continue;
    }
    BranchFactor in;
    BranchFactor rest;
    const auto& label = b->branches.front().label;
    in.branches.push_back({BitString(), b->branches.front().amplitude});
    rest.branches.push_back({BitString(), 1.0});
    for (std::size_t i = 0; i < b->wires.size(); ++i) {
      auto& part = wires.has(b->wires[i]) ? in : rest;
      part.wires.push_back(b->wires[i]);
      part.branches.front().label.push_back(label[i]);
    }
    if (in.wires.empty() || rest.wires.empty()) {
      out.push_back(std::move(f));
      continue;
    }
    out.emplace_back(std::move(in));
    out.emplace_back(std::move(rest));
  }
  fs = std::move(out);
}

/// Source-wire value if every source wire is definite, else nullopt.
std::optional<BitString> definite_sources(const LazyXorFactor& lazy) {
  BitString m(lazy.source_wires.size());
  for (std::size_t k = 0; k < lazy.source_wires.size(); ++k) {
    auto w = lazy.source_wires[k];
    bool found = false;
    for (const auto& s : lazy.sources) {
      if (!contains(s.wires, w)) continue;
      auto pos = position_of(s.wires, w);
      if (!is_definite(s, pos)) return std::nullopt;
      m.set(k, s.branches.front().label[pos]);
      found = true;
    }
    if (!found) return std::nullopt;
  }
  return m;
}

std::vector<Factor> dissolve(LazyXorFactor lazy, const BitString& m) {
  std::vector<Factor> out;
  BitString value = lazy_target_value(lazy, m);
  for (auto& s : lazy.sources) out.emplace_back(std::move(s));
  BranchFactor targets;
  targets.wires = std::move(lazy.target_wires);
  targets.branches.push_back({std::move(value), 1.0});
  out.emplace_back(std::move(targets));
  return out;
}

/// Outcome per wire number: -1 unmeasured, else the bit.
using Outcomes = std::vector<signed char>;

struct MeasureRequest {
  std::vector<std::size_t> wires;
  std::vector<bool> hadamard;
};

/// Applies the per-factor measurement and returns outcome bits keyed by wire.
void measure_factor(Factor f, const MeasureRequest& req, Rng& rng, std::vector<Factor>& out,
                    Outcomes& results) {
  const WireIndex req_index(req.wires);

  if (auto* lazy = std::get_if<LazyXorFactor>(&f)) {
    const WireIndex targets(lazy->target_wires);
    const WireIndex sources(lazy->source_wires);
    bool ok = true;
    bool targets_measured = false;
    for (std::size_t k = 0; k < req.wires.size(); ++k) {
      auto w = req.wires[k];
      bool is_target = targets.has(w);
      if ((is_target || sources.has(w)) && req.hadamard[k]) ok = false;
      targets_measured = targets_measured || is_target;
    }
    if (ok && targets_measured) {
      for (const auto& s : lazy->sources)
        for (std::size_t pos = 0; pos < s.wires.size(); ++pos)
          if (sources.has(s.wires[pos]) && !req_index.has(s.wires[pos]) && !is_definite(s, pos))
            ok = false;
    }
    if (ok) {
      std::vector<BranchFactor> new_sources;
      for (auto& s : lazy->sources) {
        // Request order restricted to this source factor.
        std::vector<std::pair<std::size_t, std::size_t>> hits;  // (request index, position)
        for (std::size_t i = 0; i < s.wires.size(); ++i)
          if (auto k = req_index.at(s.wires[i]); k != WireIndex::npos) hits.emplace_back(k, i);
        std::sort(hits.begin(), hits.end());
        std::vector<std::size_t> pos;
        std::vector<bool> had;
        std::vector<std::size_t> measured;
        for (auto [k, i] : hits) {
          pos.push_back(i);
          had.push_back(req.hadamard[k]);
          measured.push_back(req.wires[k]);
        }
        if (pos.empty()) {
          new_sources.push_back(std::move(s));
          continue;
        }
        std::vector<Factor> pieces;
        BitString o = measure_branch_factor(std::move(s), pos, had, rng, pieces);
        for (std::size_t i = 0; i < measured.size(); ++i) results[measured[i]] = o[i];
        for (auto& piece : pieces) new_sources.push_back(std::get<BranchFactor>(std::move(piece)));
      }
      lazy->sources = std::move(new_sources);
      if (auto m = definite_sources(*lazy)) {
        BitString value = lazy_target_value(*lazy, *m);
        for (std::size_t k = 0; k < lazy->target_wires.size(); ++k)
          if (req_index.has(lazy->target_wires[k])) results[lazy->target_wires[k]] = value[k];
        for (auto& piece : dissolve(std::move(*lazy), *m)) out.push_back(std::move(piece));
      } else {
        out.emplace_back(std::move(*lazy));
      }
      return;
    }
    f = materialize(f);
  }
  auto& b = std::get<BranchFactor>(f);
  bool any_hadamard = std::find(req.hadamard.begin(), req.hadamard.end(), true) != req.hadamard.end();
  if (b.branches.size() == 1 && b.wires.size() > 1 && any_hadamard) {
    // Product of definite wires: Hadamard-measured wires go one at a time so
    // their outcomes never multiply branches across the whole factor.
    const auto& label = b.branches.front().label;
    BranchFactor rest;
    rest.branches.push_back({BitString(), b.branches.front().amplitude});
    std::vector<std::size_t> rest_pos;
    std::vector<std::size_t> rest_req;
    for (std::size_t i = 0; i < b.wires.size(); ++i) {
      auto w = b.wires[i];
      auto k = req_index.at(w);
      if (k != WireIndex::npos && req.hadamard[k]) {
        BranchFactor single;
        single.wires = {w};
        single.branches.push_back({BitString{label[i] ? 1 : 0}, 1.0});
        measure_factor(std::move(single), MeasureRequest{{w}, {true}}, rng, out, results);
        continue;
      }
      if (k != WireIndex::npos) {
        rest_pos.push_back(rest.wires.size());
        rest_req.push_back(w);
      }
      rest.wires.push_back(w);
      rest.branches.front().label.push_back(label[i]);
    }
    if (rest.wires.empty()) {
      // Keep the global sign on one of the measured pieces.
      if (rest.branches.front().amplitude < 0)
        for (auto& br : std::get<BranchFactor>(out.back()).branches) br.amplitude = -br.amplitude;
      return;
    }
    if (rest_pos.empty()) {
      out.emplace_back(std::move(rest));
      return;
    }
    BitString o = measure_branch_factor(std::move(rest), rest_pos, std::vector<bool>(rest_pos.size(), false), rng, out);
    for (std::size_t k = 0; k < rest_req.size(); ++k) results[rest_req[k]] = o[k];
    return;
  }
  std::vector<std::size_t> pos;
  const WireIndex where(b.wires);
  for (auto w : req.wires) pos.push_back(where.at(w));
  BitString o = measure_branch_factor(std::move(b), pos, req.hadamard, rng, out);
  for (std::size_t k = 0; k < req.wires.size(); ++k) results[req.wires[k]] = o[k];
}

void check_wires(std::size_t n, std::span<const std::size_t> wires, const char* what) {
  std::vector<bool> seen(n, false);
  for (auto w : wires) {
    if (w >= n) throw Error(Errc::kLengthMismatch, std::string(what) + ": wire index out of range");
    if (seen[w]) throw Error(Errc::kLengthMismatch, std::string(what) + ": repeated wire");
    seen[w] = true;
  }
}

BranchFactor expand(const QReg& reg, std::size_t cap) {
  if (reg.branch_count() > static_cast<double>(cap))
    throw Error(Errc::kTooLarge, "register expansion exceeds cap");
  BranchFactor all;
  all.branches.push_back({BitString(), 1.0});
  for (const auto& f : RegAccess::factors(reg)) all = tensor(all, materialize(f));
  // reorder label bits into global wire order
  std::vector<std::size_t> pos(reg.n_wires());
  for (std::size_t i = 0; i < all.wires.size(); ++i) pos[all.wires[i]] = i;
  BranchFactor out;
  for (std::size_t w = 0; w < reg.n_wires(); ++w) out.wires.push_back(w);
  out.branches.reserve(all.branches.size());
  for (auto& br : all.branches) out.branches.push_back({read_positions(br.label, pos), br.amplitude});
  return out;
}

nlohmann::json branch_factor_json(const BranchFactor& f) {
  nlohmann::json branches = nlohmann::json::array();
  for (const auto& b : f.branches) branches.push_back({b.label.to_string(), b.amplitude});
  return {{"wires", f.wires}, {"branches", branches}};
}

BranchFactor branch_factor_from_json(const nlohmann::json& j) {
  BranchFactor f;
  f.wires = j.at("wires").get<std::vector<std::size_t>>();
  for (const auto& b : j.at("branches")) {
    f.branches.push_back({BitString::from_string(b.at(0).get<std::string>()), b.at(1).get<double>()});
    if (f.branches.back().label.size() != f.wires.size())
      throw Error(Errc::kDecodeError, "branch label width differs from factor width");
  }
  return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// QReg

QReg QReg::from_branches(std::size_t n_wires, std::vector<Branch> branches) {
  if (branches.empty()) throw Error(Errc::kParameterError, "register needs at least one branch");
  std::set<BitString> labels;
  double norm = 0.0;
  for (const auto& b : branches) {
    if (b.label.size() != n_wires) throw Error(Errc::kLengthMismatch, "branch label width differs from n_wires");
    if (!labels.insert(b.label).second) throw Error(Errc::kParameterError, "duplicate branch label");
    norm += b.amplitude * b.amplitude;
  }
  if (std::abs(norm - 1.0) > kTolerance) throw Error(Errc::kParameterError, "amplitudes are not normalized");
  QReg reg;
  reg.n_ = n_wires;
  if (n_wires == 0) return reg;
  BranchFactor f;
  f.wires.resize(n_wires);
  std::iota(f.wires.begin(), f.wires.end(), std::size_t{0});
  f.branches = std::move(branches);
  reg.factors_.emplace_back(std::move(f));
  return reg;
}

QReg QReg::basis_state(const BitString& bits) {
  QReg reg;
  reg.n_ = bits.size();
  for (std::size_t j = 0; j < bits.size(); ++j) reg.factors_.emplace_back(single_wire(j, bits[j], false));
  return reg;
}

double QReg::branch_count() const {
  double count = 1.0;
  for (const auto& f : factors_) {
    if (const auto* b = std::get_if<BranchFactor>(&f)) {
      count *= static_cast<double>(b->branches.size());
    } else {
      for (const auto& s : std::get<LazyXorFactor>(f).sources) count *= static_cast<double>(s.branches.size());
    }
  }
  return count;
}

std::vector<Branch> QReg::branches(std::size_t cap) const {
  auto all = expand(*this, cap);
  std::sort(all.branches.begin(), all.branches.end(),
            [](const Branch& a, const Branch& b) { return a.label < b.label; });
  return std::move(all.branches);
}

double QReg::norm_squared() const {
  double total = 1.0;
  for (const auto& f : factors_) {
    double part = 0.0;
    if (const auto* b = std::get_if<BranchFactor>(&f)) {
      for (const auto& br : b->branches) part += br.amplitude * br.amplitude;
    } else {
      part = 1.0;
      for (const auto& s : std::get<LazyXorFactor>(f).sources) {
        double sp = 0.0;
        for (const auto& br : s.branches) sp += br.amplitude * br.amplitude;
        part *= sp;
      }
    }
    total *= part;
  }
  return total;
}

bool QReg::same_state(const QReg& other) const {
  if (n_ != other.n_) return false;
  auto a = branches();
  auto b = other.branches();
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].label != b[i].label) return false;
    if (std::abs(a[i].amplitude - b[i].amplitude) > kTolerance) return false;
  }
  return true;
}

nlohmann::json QReg::to_json() const {
  nlohmann::json factors = nlohmann::json::array();
  bool expandable = branch_count() <= 4096.0;
  for (const auto& f : factors_) {
    if (const auto* b = std::get_if<BranchFactor>(&f)) {
      factors.push_back(branch_factor_json(*b));
      continue;
    }
    const auto& lazy = std::get<LazyXorFactor>(f);
    nlohmann::json sources = nlohmann::json::array();
    for (const auto& s : lazy.sources) sources.push_back(branch_factor_json(s));
    nlohmann::json maps = nlohmann::json::array();
    for (const auto& m : lazy.maps) {
      if (m.kind.empty()) throw Error(Errc::kDecodeError, "map '" + m.id + "' has no serialization kind");
      maps.push_back({{"id", m.id}, {"kind", m.kind}, {"param", to_hex(m.param)}, {"out_width", m.out_width}});
    }
    factors.push_back({{"lazy_xor",
                        {{"sources", sources},
                         {"source_wires", lazy.source_wires},
                         {"target_wires", lazy.target_wires},
                         {"constant", lazy.constant.to_string()},
                         {"maps", maps}}}});
  }
  nlohmann::json j = {{"n", n_}, {"simulation_artifact", true}, {"factors", factors}};
  if (expandable) {
    nlohmann::json branches_json = nlohmann::json::array();
    for (const auto& b : branches()) branches_json.push_back({b.label.to_string(), b.amplitude});
    j["branches"] = branches_json;
  }
  return j;
}

QReg QReg::from_json(const nlohmann::json& j, const MapResolver& resolver) {
  std::size_t n = j.at("n").get<std::size_t>();
  if (!j.contains("factors")) {
    std::vector<Branch> branches;
    for (const auto& b : j.at("branches"))
      branches.push_back({BitString::from_string(b.at(0).get<std::string>()), b.at(1).get<double>()});
    return from_branches(n, std::move(branches));
  }
  QReg reg;
  reg.n_ = n;
  std::vector<bool> seen(n, false);
  for (const auto& fj : j.at("factors")) {
    if (!fj.contains("lazy_xor")) {
      reg.factors_.emplace_back(branch_factor_from_json(fj));
    } else {
      const auto& lj = fj.at("lazy_xor");
      LazyXorFactor lazy;
      for (const auto& s : lj.at("sources")) lazy.sources.push_back(branch_factor_from_json(s));
      lazy.source_wires = lj.at("source_wires").get<std::vector<std::size_t>>();
      lazy.target_wires = lj.at("target_wires").get<std::vector<std::size_t>>();
      lazy.constant = BitString::from_string(lj.at("constant").get<std::string>());
      for (const auto& mj : lj.at("maps")) {
        if (!resolver) throw Error(Errc::kDecodeError, "lazy factor requires a map resolver");
        lazy.maps.push_back(resolver(mj.at("kind").get<std::string>(), from_hex(mj.at("param").get<std::string>()),
                                     mj.at("id").get<std::string>(), mj.at("out_width").get<std::size_t>()));
      }
      reg.factors_.emplace_back(std::move(lazy));
    }
    for (auto w : wires_of(reg.factors_.back())) {
      if (w >= n || seen[w]) throw Error(Errc::kDecodeError, "factor wires overlap or exceed n");
      seen[w] = true;
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw Error(Errc::kDecodeError, "factors do not cover every wire");
  if (!reg.normalized()) throw Error(Errc::kDecodeError, "register is not normalized");
  return reg;
}

// ---------------------------------------------------------------------------
// Operations

QReg bb84_prepare(const BitString& x, const BasisString& theta) {
  if (x.size() != theta.size()) throw Error(Errc::kLengthMismatch, "|x| must equal |theta|");
  QReg reg;
  RegAccess::n(reg) = x.size();
  auto& fs = RegAccess::factors(reg);
  fs.reserve(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) fs.emplace_back(single_wire(j, x[j], theta.is_hadamard(j)));
  return reg;
}

MeasurementOutcome measure_wires(const QReg& reg, std::span<const std::size_t> wires, const BasisString& basis,
                                 Rng& rng) {
  if (basis.size() != wires.size()) throw Error(Errc::kLengthMismatch, "basis length differs from wire count");
  check_wires(reg.n_wires(), wires, "measure");
  auto owner = owners(reg);
  const auto& fs = RegAccess::factors(reg);

  std::vector<std::size_t> order;
  std::map<std::size_t, MeasureRequest> requests;
  for (std::size_t k = 0; k < wires.size(); ++k) {
    auto fi = owner[wires[k]];
    if (requests.find(fi) == requests.end()) order.push_back(fi);
    requests[fi].wires.push_back(wires[k]);
    requests[fi].hadamard.push_back(basis.is_hadamard(k));
  }

  QReg post;
  RegAccess::n(post) = reg.n_wires();
  auto& out = RegAccess::factors(post);
  for (std::size_t i = 0; i < fs.size(); ++i)
    if (requests.find(i) == requests.end()) out.push_back(fs[i]);
  Outcomes results(reg.n_wires(), -1);
  for (auto fi : order) measure_factor(fs[fi], requests[fi], rng, out, results);

  BitString outcome(wires.size());
  for (std::size_t k = 0; k < wires.size(); ++k) {
    if (results[wires[k]] < 0) throw Error(Errc::kParameterError, "internal: wire left unmeasured");
    outcome.set(k, results[wires[k]] == 1);
  }
  return {std::move(outcome), std::move(post)};
}

MeasurementOutcome measure_in_basis(const QReg& reg, const BasisString& basis, Rng& rng) {
  if (basis.size() > reg.n_wires()) throw Error(Errc::kLengthMismatch, "basis longer than register");
  std::vector<std::size_t> wires(basis.size());
  std::iota(wires.begin(), wires.end(), std::size_t{0});
  return measure_wires(reg, wires, basis, rng);
}

MeasurementOutcome measure_computational(const QReg& reg, Rng& rng) {
  return measure_in_basis(reg, BasisString::computational(reg.n_wires()), rng);
}

QReg apply_xor_map(const QReg& reg, const XorMap& map) {
  std::vector<std::size_t> sources(reg.n_wires());
  std::iota(sources.begin(), sources.end(), std::size_t{0});
  std::vector<std::size_t> targets(map.out_width);
  std::iota(targets.begin(), targets.end(), reg.n_wires());
  QReg extended = reg;
  RegAccess::n(extended) = reg.n_wires() + map.out_width;
  BranchFactor zeros;
  zeros.wires = targets;
  zeros.branches.push_back({BitString(map.out_width), 1.0});
  RegAccess::factors(extended).emplace_back(std::move(zeros));
  return apply_xor_map(extended, map, sources, targets);
}

QReg apply_xor_map(const QReg& reg, const XorMap& map, std::span<const std::size_t> sources,
                   std::span<const std::size_t> targets) {
  if (!map.fn) throw Error(Errc::kParameterError, "map has no function");
  if (targets.size() != map.out_width)
    throw Error(Errc::kWidthMismatch, "target width " + std::to_string(targets.size()) +
                                          " differs from map out_width " + std::to_string(map.out_width));
  check_wires(reg.n_wires(), sources, "xor-map sources");
  check_wires(reg.n_wires(), targets, "xor-map targets");
  for (auto t : targets)
    if (std::find(sources.begin(), sources.end(), t) != sources.end())
      throw Error(Errc::kParameterError, "xor-map sources and targets overlap");

  const std::vector<std::size_t> src(sources.begin(), sources.end());
  const std::vector<std::size_t> tgt(targets.begin(), targets.end());
  QReg out = reg;
  auto& fs = RegAccess::factors(out);

  // Same wiring as an existing lazy factor: compose, or cancel an identical map.
  for (auto it = fs.begin(); it != fs.end(); ++it) {
    auto* lazy = std::get_if<LazyXorFactor>(&*it);
    if (lazy == nullptr || lazy->source_wires != src || lazy->target_wires != tgt) continue;
    auto same = std::find_if(lazy->maps.begin(), lazy->maps.end(), [&](const XorMap& m) { return m.id == map.id; });
    if (same != lazy->maps.end()) {
      lazy->maps.erase(same);
    } else {
      lazy->maps.push_back(map);
    }
    if (lazy->maps.empty()) {
      LazyXorFactor taken = std::move(*lazy);
      fs.erase(it);
      BitString zero_input(taken.source_wires.size());
      for (auto& piece : dissolve(std::move(taken), zero_input)) fs.push_back(std::move(piece));
    }
    return out;
  }

  const WireIndex tgt_index(tgt);
  isolate_wires(fs, tgt_index);
  auto owner = owners(out);
  std::set<std::size_t> source_factors;
  std::set<std::size_t> target_factors;
  for (auto w : src) source_factors.insert(owner[w]);
  for (auto w : tgt) target_factors.insert(owner[w]);

  bool lazy_ok = true;
  for (auto fi : target_factors) {
    const auto* b = std::get_if<BranchFactor>(&fs[fi]);
    if (b == nullptr || b->branches.size() != 1 || source_factors.count(fi) != 0) {
      lazy_ok = false;
      continue;
    }
    for (auto w : b->wires)
      if (!tgt_index.has(w)) lazy_ok = false;
  }
  for (auto fi : source_factors)
    if (!std::holds_alternative<BranchFactor>(fs[fi])) lazy_ok = false;

  if (lazy_ok) {
    LazyXorFactor lazy;
    lazy.source_wires = src;
    lazy.target_wires = tgt;
    lazy.constant = BitString(tgt.size());
    for (auto fi : target_factors) {
      const auto& b = std::get<BranchFactor>(fs[fi]);
      for (std::size_t i = 0; i < b.wires.size(); ++i)
        lazy.constant.set(tgt_index.at(b.wires[i]), b.branches.front().label[i]);
    }
    for (auto fi : source_factors) lazy.sources.push_back(std::get<BranchFactor>(fs[fi]));
    lazy.maps.push_back(map);
    std::vector<Factor> rest;
    for (std::size_t i = 0; i < fs.size(); ++i)
      if (source_factors.count(i) == 0 && target_factors.count(i) == 0) rest.push_back(std::move(fs[i]));
    if (auto m = definite_sources(lazy)) {
      // Classical input: write the targets now.
      for (auto& piece : dissolve(std::move(lazy), *m)) rest.push_back(std::move(piece));
    } else {
      rest.emplace_back(std::move(lazy));
    }
    fs = std::move(rest);
    return out;
  }

  std::set<std::size_t> involved = source_factors;
  involved.insert(target_factors.begin(), target_factors.end());
  BranchFactor merged;
  merged.branches.push_back({BitString(), 1.0});
  for (auto fi : involved) merged = tensor(merged, materialize(fs[fi]));
  std::vector<std::size_t> spos;
  std::vector<std::size_t> tpos;
  for (auto w : src) spos.push_back(position_of(merged.wires, w));
  for (auto w : tgt) tpos.push_back(position_of(merged.wires, w));
  for (auto& br : merged.branches) {
    BitString value = evaluate_map(map, read_positions(br.label, spos));
    for (std::size_t k = 0; k < tpos.size(); ++k)
      if (value[k]) br.label.flip(tpos[k]);
  }
  std::vector<Factor> rest;
  for (std::size_t i = 0; i < fs.size(); ++i)
    if (involved.count(i) == 0) rest.push_back(std::move(fs[i]));
  rest.emplace_back(std::move(merged));
  fs = std::move(rest);
  return out;
}

QReg apply_hadamard(const QReg& reg, std::span<const std::size_t> wires) {
  check_wires(reg.n_wires(), wires, "hadamard");
  QReg out = reg;
  auto& fs = RegAccess::factors(out);
  for (auto w : wires) {
    auto owner = owners(out);
    auto& f = fs[owner[w]];
    if (auto* lazy = std::get_if<LazyXorFactor>(&f)) {
      if (!contains(lazy->source_wires, w) && !contains(lazy->target_wires, w)) {
        for (auto& s : lazy->sources)
          if (contains(s.wires, w)) hadamard_local(s, position_of(s.wires, w));
        continue;
      }
      f = materialize(f);
    }
    auto& b = std::get<BranchFactor>(f);
    hadamard_local(b, position_of(b.wires, w));
  }
  return out;
}

std::vector<double> dense_statevector(const QReg& reg, std::size_t cap) {
  if (reg.n_wires() > cap)
    throw Error(Errc::kTooLarge, std::to_string(reg.n_wires()) + " wires exceed dense cap " + std::to_string(cap));
  std::vector<double> vec(std::size_t{1} << reg.n_wires(), 0.0);
  std::size_t n = reg.n_wires();
  for (const auto& br : expand(reg, vec.size()).branches) {
    std::size_t index = 0;
    for (std::size_t w = 0; w < n; ++w)
      if (br.label[w]) index |= std::size_t{1} << (n - 1 - w);
    vec[index] += br.amplitude;
  }
  return vec;
}

// ---------------------------------------------------------------------------
// Distributions

double Distribution::prob(const std::string& outcome) const {
  auto it = masses_.find(outcome);
  return it == masses_.end() ? 0.0 : it->second;
}

double Distribution::total() const {
  double t = 0.0;
  for (const auto& [k, p] : masses_) t += p;
  return t;
}

namespace {

using LocalDist = std::map<BitString, double>;

/// Exact distribution of the requested wires of one factor (outcome bits in request order).
LocalDist factor_distribution(const Factor& f, const MeasureRequest& req) {
  if (const auto* lazy = std::get_if<LazyXorFactor>(&f)) {
    bool ok = true;
    bool targets_measured = false;
    for (std::size_t k = 0; k < req.wires.size(); ++k) {
      bool is_target = contains(lazy->target_wires, req.wires[k]);
      if ((is_target || contains(lazy->source_wires, req.wires[k])) && req.hadamard[k]) ok = false;
      targets_measured = targets_measured || is_target;
    }
    if (ok) {
      // Joint distribution over each source factor's needed positions.
      std::vector<std::size_t> needed;
      for (std::size_t k = 0; k < req.wires.size(); ++k)
        if (!contains(lazy->target_wires, req.wires[k])) needed.push_back(req.wires[k]);
      if (targets_measured)
        for (auto w : lazy->source_wires)
          if (!contains(needed, w)) needed.push_back(w);
      // joint: assignment over `joint_wires`
      std::vector<std::size_t> joint_wires;
      std::vector<std::pair<BitString, double>> joint{{BitString(), 1.0}};
      for (const auto& s : lazy->sources) {
        BranchFactor copy = s;
        std::vector<std::size_t> pos;
        for (auto w : needed) {
          if (!contains(copy.wires, w)) continue;
          auto p = position_of(copy.wires, w);
          auto k = static_cast<std::size_t>(std::find(req.wires.begin(), req.wires.end(), w) - req.wires.begin());
          if (k < req.wires.size() && req.hadamard[k]) hadamard_local(copy, p);
          pos.push_back(p);
          joint_wires.push_back(w);
        }
        if (pos.empty()) continue;
        auto m = marginal(copy, pos);
        std::vector<std::pair<BitString, double>> next;
        if (static_cast<double>(joint.size()) * static_cast<double>(m.size()) > static_cast<double>(kMaxBranches))
          throw Error(Errc::kTooLarge, "outcome distribution exceeds kMaxBranches");
        for (const auto& [a, pa] : joint)
          for (const auto& [b, pb] : m) next.push_back({concat(a, b), pa * pb});
        joint = std::move(next);
      }
      LocalDist out;
      for (const auto& [assign, p] : joint) {
        if (p <= 0.0) continue;
        BitString value;
        if (targets_measured) {
          BitString m(lazy->source_wires.size());
          for (std::size_t k = 0; k < lazy->source_wires.size(); ++k)
            m.set(k, assign[position_of(joint_wires, lazy->source_wires[k])]);
          value = lazy_target_value(*lazy, m);
        }
        BitString o(req.wires.size());
        for (std::size_t k = 0; k < req.wires.size(); ++k) {
          auto w = req.wires[k];
          if (contains(lazy->target_wires, w)) {
            o.set(k, value[position_of(lazy->target_wires, w)]);
          } else {
            o.set(k, assign[position_of(joint_wires, w)]);
          }
        }
        out[o] += p;
      }
      return out;
    }
  }
  BranchFactor b = materialize(f);
  std::vector<std::size_t> pos;
  for (std::size_t k = 0; k < req.wires.size(); ++k) {
    pos.push_back(position_of(b.wires, req.wires[k]));
    if (req.hadamard[k]) hadamard_local(b, pos.back());
  }
  return marginal(b, pos);
}

}  // namespace

Distribution outcome_distribution(const QReg& reg, std::span<const std::size_t> wires, const BasisString& basis) {
  if (basis.size() != wires.size()) throw Error(Errc::kLengthMismatch, "basis length differs from wire count");
  check_wires(reg.n_wires(), wires, "distribution");
  auto owner = owners(reg);
  const auto& fs = RegAccess::factors(reg);
  std::vector<std::size_t> order;
  std::map<std::size_t, MeasureRequest> requests;
  for (std::size_t k = 0; k < wires.size(); ++k) {
    auto fi = owner[wires[k]];
    if (requests.find(fi) == requests.end()) order.push_back(fi);
    requests[fi].wires.push_back(wires[k]);
    requests[fi].hadamard.push_back(basis.is_hadamard(k));
  }

  std::vector<std::size_t> joint_wires;
  std::vector<std::pair<BitString, double>> joint{{BitString(), 1.0}};
  for (auto fi : order) {
    auto local = factor_distribution(fs[fi], requests[fi]);
    if (static_cast<double>(joint.size()) * static_cast<double>(local.size()) > static_cast<double>(kMaxBranches))
      throw Error(Errc::kTooLarge, "outcome distribution exceeds kMaxBranches");
    std::vector<std::pair<BitString, double>> next;
    next.reserve(joint.size() * local.size());
    for (const auto& [a, pa] : joint)
      for (const auto& [b, pb] : local) next.push_back({concat(a, b), pa * pb});
    joint = std::move(next);
    joint_wires.insert(joint_wires.end(), requests[fi].wires.begin(), requests[fi].wires.end());
  }
  std::vector<std::size_t> pos;
  for (auto w : wires) pos.push_back(position_of(joint_wires, w));
  Distribution dist("bits:" + std::to_string(wires.size()));
  for (const auto& [assign, p] : joint) dist.add(read_positions(assign, pos).to_string(), p);
  return dist;
}

Distribution outcome_distribution(const QReg& reg, const BasisString& basis) {
  if (basis.size() > reg.n_wires()) throw Error(Errc::kLengthMismatch, "basis longer than register");
  std::vector<std::size_t> wires(basis.size());
  std::iota(wires.begin(), wires.end(), std::size_t{0});
  return outcome_distribution(reg, wires, basis);
}

double distribution_trace_distance(const Distribution& p, const Distribution& q) {
  if (p.domain() != q.domain())
    throw Error(Errc::kDomainMismatch, "outcome spaces differ: '" + p.domain() + "' vs '" + q.domain() + "'");
  double sum = 0.0;
  for (const auto& [k, pk] : p.masses()) sum += std::abs(pk - q.prob(k));
  for (const auto& [k, qk] : q.masses())
    if (p.masses().find(k) == p.masses().end()) sum += std::abs(qk);
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

}  // namespace rcd::qstate
