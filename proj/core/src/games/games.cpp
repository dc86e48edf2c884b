// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rcd/games/games.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "rcd/error.hpp"
#include "rcd/hash.hpp"

namespace rcd::games {

using nlohmann::json;

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::kDecryptionGame:
      return "decryption";
    case Experiment::kVerificationGame:
      return "verification";
    case Experiment::kExpCd:
      return "exp-cd";
    case Experiment::kExpCed:
      return "exp-ced";
    case Experiment::kExpShad:
      return "exp-shad";
    case Experiment::kCel:
      return "cel";
  }
  return "unknown";
}

Experiment experiment_from_string(std::string_view s) {
  for (auto e : {Experiment::kDecryptionGame, Experiment::kVerificationGame, Experiment::kExpCd, Experiment::kExpCed,
                 Experiment::kExpShad, Experiment::kCel})
    if (to_string(e) == s) return e;
  throw Error(Errc::kParameterError, "unknown experiment '" + std::string(s) + "'");
}

std::string key_id(const AnyPublicKey& pk) { return to_hex(digest_bytes(sha256(protocols::serialize_key(pk)), 8)); }

std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index) {
  return Rng::mix(Rng::mix(base) ^ (index * 0xd1b54a32d192ed03ULL + 1));
}

void GameTranscript::append(json event) { events_.push_back(std::move(event)); }

std::string GameTranscript::to_jsonl() const {
  std::string out;
  for (const auto& e : events_) {
    out += e.dump();
    out += '\n';
  }
  return out;
}

GameTranscript GameTranscript::from_jsonl(std::string_view text) {
  GameTranscript t;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    if (!line.empty()) {
      try {
        t.events_.push_back(json::parse(line));
      } catch (const json::exception& e) {
        throw Error(Errc::kDecodeError, std::string("transcript line: ") + e.what());
      }
    }
    pos = end + 1;
  }
  return t;
}

AdmissibilityResult admissibility_check(const PolicyDictionary& d, const std::vector<std::string>& c,
                                        const BitString& x_star) {
  for (const auto& id : c) {
    auto it = d.find(id);
    if (it == d.end()) continue;
    for (const auto& p : it->second)
      if (p.eval(x_star)) return {false, id, p.to_string()};
  }
  return {};
}

// Adversary defaults

void Adversary::on_setup(const SetupInfo&, Rng&) {}
void Adversary::query_phase(OracleHandle&, Rng&) {}

DeletionCert Adversary::deletion_phase(OracleHandle&, ChallengeView&, Rng&) {
  throw Error(Errc::kAdversaryProtocolViolation, std::string(name()) + " has no deletion strategy");
}

bool Adversary::guess(OracleHandle&, const ChallengeView&, const std::vector<RevealedKey>&, Rng& rng) {
  return rng.bit();
}

ResidualView Adversary::residual() const { return {}; }

std::string ExperimentResult::label() const {
  switch (output) {
    case Output::kBottom:
      return "bottom";
    case Output::kBit:
      return bit ? "bit:1" : "bit:0";
    case Output::kResidual:
      return residual ? residual->label : "residual";
  }
  return "unknown";
}

// Statistics

std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  double nn = static_cast<double>(n);
  double p = static_cast<double>(k) / nn;
  double z2 = z * z;
  double denom = 1.0 + z2 / nn;
  double centre = (p + z2 / (2 * nn)) / denom;
  double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

AdvantageEstimate estimate_advantage(const std::vector<int>& outputs0, const std::vector<int>& outputs1, double z) {
  if (outputs0.empty() || outputs1.empty())
    throw Error(Errc::kParameterError, "advantage needs trials for both challenge bits");
  auto ones = [](const std::vector<int>& v) {
    return static_cast<std::size_t>(std::count(v.begin(), v.end(), 1));
  };
  AdvantageEstimate a;
  a.n0 = outputs0.size();
  a.n1 = outputs1.size();
  std::size_t k0 = ones(outputs0);
  std::size_t k1 = ones(outputs1);
  a.p0 = static_cast<double>(k0) / static_cast<double>(a.n0);
  a.p1 = static_cast<double>(k1) / static_cast<double>(a.n1);
  auto [l0, u0] = wilson_interval(k0, a.n0, z);
  auto [l1, u1] = wilson_interval(k1, a.n1, z);
  // Newcombe's hybrid score interval for p1 - p0.
  double d = a.p1 - a.p0;
  double lo = d - std::sqrt((a.p1 - l1) * (a.p1 - l1) + (u0 - a.p0) * (u0 - a.p0));
  double hi = d + std::sqrt((u1 - a.p1) * (u1 - a.p1) + (a.p0 - l0) * (a.p0 - l0));
  a.advantage = std::abs(d);
  if (lo <= 0.0 && hi >= 0.0) {
    a.ci_low = 0.0;
    a.ci_high = std::max(-lo, hi);
  } else {
    a.ci_low = std::min(std::abs(lo), std::abs(hi));
    a.ci_high = std::max(std::abs(lo), std::abs(hi));
  }
  return a;
}

AdvantageEstimate estimate_advantage(const std::vector<ExperimentResult>& results0,
                                     const std::vector<ExperimentResult>& results1, double z) {
  auto outputs = [](const std::vector<ExperimentResult>& rs) {
    std::vector<int> out;
    out.reserve(rs.size());
    for (const auto& r : rs) out.push_back(r.output == ExperimentResult::Output::kBit && r.bit ? 1 : 0);
    return out;
  };
  return estimate_advantage(outputs(results0), outputs(results1), z);
}

qstate::Distribution empirical_distribution(const std::vector<ExperimentResult>& results) {
  qstate::Distribution d("residual");
  if (results.empty()) return d;
  double w = 1.0 / static_cast<double>(results.size());
  for (const auto& r : results) d.add(r.label(), w);
  return d;
}

TdAgreement td_agreement(const qstate::Distribution& exact0, const qstate::Distribution& exact1,
                         const std::vector<ExperimentResult>& samples0, const std::vector<ExperimentResult>& samples1,
                         double z_limit) {
  if (samples0.empty() || samples1.empty()) throw Error(Errc::kParameterError, "no samples");
  const auto emp0 = empirical_distribution(samples0);
  const auto emp1 = empirical_distribution(samples1);
  TdAgreement out;
  out.exact = qstate::distribution_trace_distance(exact0, exact1);
  out.agree = true;

  std::map<std::string, int> outcomes;
  for (const qstate::Distribution* d : {&exact0, &exact1, &emp0, &emp1})
    for (const auto& [k, v] : d->masses()) outcomes[k] = 0;

  double n0 = static_cast<double>(samples0.size());
  double n1 = static_cast<double>(samples1.size());
  double td = 0.0;
  for (const auto& [k, unused] : outcomes) {
    double p = exact0.prob(k);
    double q = exact1.prob(k);
    double ph = emp0.prob(k);
    double qh = emp1.prob(k);
    td += std::abs(ph - qh);
    double sigma = std::sqrt(p * (1 - p) / n0 + q * (1 - q) / n1);
    double dev = std::abs((ph - qh) - (p - q));
    if (sigma > 0) {
      out.max_z = std::max(out.max_z, dev / sigma);
      if (dev > z_limit * sigma) out.agree = false;
    } else if (dev > 1e-12) {
      // An outcome the exact computation rules out showed up in the samples.
      out.agree = false;
      out.max_z = std::max(out.max_z, std::numeric_limits<double>::infinity());
    }
  }
  out.empirical = td / 2;
  return out;
}

std::vector<ExperimentResult> run_trials(std::size_t n, std::size_t jobs,
                                         const std::function<ExperimentResult(std::size_t)>& fn) {
  std::vector<ExperimentResult> out(n);
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          out[i] = fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace rcd::games
