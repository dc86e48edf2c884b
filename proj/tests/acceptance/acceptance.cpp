// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any
// criterion fails. `acceptance 3 7` runs a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "random_ops.hpp"
#include "rcd/error.hpp"
#include "rcd/games/games.hpp"
#include "rcd/primitives/oss.hpp"
#include "rcd/primitives/sig.hpp"
#include "rcd/protocols/system.hpp"
#include "rcd/rabe/rabe.hpp"
#include "rcd/shad/shad.hpp"

namespace {

using namespace rcd;
using protocols::SchemeTag;
using protocols::System;

// Pinned tolerances and sizes.
constexpr double kSigmaBound = 4.0;          // binomial standard deviations
constexpr double kExactTol = 1e-9;           // exact trace distance
constexpr double kOracleTol = 1e-9;          // dense-oracle amplitude agreement
constexpr double kAdvantageBound = 0.05;     // criterion 10
constexpr double kE2eBudgetSeconds = 120.0;  // criterion 1

constexpr SchemeTag kAll[] = {SchemeTag::kPriVCD, SchemeTag::kPubVCD, SchemeTag::kPriVCED, SchemeTag::kPubVCED};

std::string name(SchemeTag s) { return std::string(protocols::to_string(s)); }

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [fail: " << what << "]";
    }
  }
};

protocols::SchemeParams params(std::size_t lambda, std::size_t ell) {
  protocols::SchemeParams p;
  p.lambda = lambda;
  p.tau = 8;
  p.message_bits = ell;
  return p;
}

BitString satisfying(const rabe::Policy& p, std::size_t tau, Rng& rng) {
  for (int t = 0; t < 256; ++t) {
    auto x = rng.bits(tau);
    if (p.eval(x)) return x;
  }
  throw Error(Errc::kParameterError, "policy has no satisfying attribute found");
}

// 1. End-to-end correctness.
Verdict criterion1() {
  constexpr std::size_t kRuns = 1000, kUsers = 8, kDirectories = 10;
  Verdict v;
  auto t0 = Clock::now();
  for (auto s : kAll) {
    std::size_t ok = 0;
    for (std::size_t d = 0; d < kDirectories; ++d) {
      Rng rng(games::trial_seed(100 + static_cast<std::uint64_t>(s), d));
      auto sys = System::setup(s, params(32, 8), rng);
      BitString anchor = rng.bits(8);
      std::vector<protocols::UserKey> users;
      for (std::size_t k = 0; k < kUsers; ++k) {
        auto u = sys.keygen(rabe::random_policy_satisfied_by(anchor, 3, rng), rng);
        sys.register_key(u.pk, u.policy);
        users.push_back(std::move(u));
      }
      std::vector<protocols::AnyHelperKey> hsks;
      for (const auto& u : users) hsks.push_back(sys.update(u.pk));
      for (std::size_t r = 0; r < kRuns / kDirectories; ++r) {
        std::size_t k = rng.below(kUsers);
        auto x = satisfying(users[k].policy, 8, rng);
        auto mu = rng.bits(8);
        auto enc = sys.encrypt(x, mu, rng);
        auto m = sys.decrypt(users[k].sk, hsks[k], x, enc.ct, rng);
        ok += m.is_ok() && m.value() == mu;
      }
    }
    v.detail << " " << name(s) << "=" << ok << "/" << kRuns;
    v.require(ok == kRuns, name(s) + " decryptions");
  }
  double secs = seconds_since(t0);
  v.detail << " in " << secs << "s";
  v.require(secs < kE2eBudgetSeconds, "runtime budget");
  return v;
}

// 2. Verification correctness.
Verdict criterion2() {
  constexpr std::size_t kRuns = 10000;
  Verdict v;
  for (auto s : kAll) {
    Rng rng(200 + static_cast<std::uint64_t>(s));
    auto sys = System::setup(s, params(16, 1), rng);
    BitString anchor = rng.bits(8);
    auto u = sys.keygen(rabe::random_policy_satisfied_by(anchor, 3, rng), rng);
    sys.register_key(u.pk, u.policy);
    std::size_t accepted = 0;
    for (std::size_t r = 0; r < kRuns; ++r) {
      auto enc = sys.encrypt(satisfying(u.policy, 8, rng), rng.bits(1), rng);
      auto cert = System::erase(enc.ct, rng);
      accepted += System::verify(enc.vk, cert);
    }
    v.detail << " " << name(s) << "=" << accepted << "/" << kRuns;
    v.require(accepted == kRuns, name(s));
  }
  v.detail << " (lambda=16, ell_m=1)";
  return v;
}

// 3. Computational-basis measurer acceptance = 2^-h.
Verdict criterion3() {
  constexpr std::size_t kTrials = 20000;
  Verdict v;
  for (auto s : {SchemeTag::kPriVCD, SchemeTag::kPriVCED}) {
    games::GameConfig c;
    c.params = params(16, 1);
    double expected = 0, var = 0, accepted = 0;
    for (std::size_t i = 0; i < kTrials; ++i) {
      c.seed = games::trial_seed(300 + static_cast<std::uint64_t>(s), i);
      auto adv = games::make_adversary("computational-measurer");
      auto r = s == SchemeTag::kPriVCD ? games::run_exp_cd(s, 0, *adv, c) : games::run_exp_ced(s, 0, *adv, c);
      double p = std::ldexp(1.0, -static_cast<int>(r.hadamard_count.value()));
      expected += p;
      var += p * (1 - p);
      accepted += !r.is_bottom();
    }
    double z = std::abs(accepted - expected) / std::sqrt(var);
    v.detail << " " << name(s) << " accepted=" << accepted << " expected=" << expected << " z=" << z;
    v.require(z <= kSigmaBound, name(s));
  }
  return v;
}

struct ShadWorld {
  std::shared_ptr<const shad::Crs> crs;
  shad::AuxState aux;
  shad::MasterPublicKey mpk;
  BitString x;
  shad::SimDictionary dict;
  std::vector<shad::PublicKey> pks;
  std::vector<rabe::Policy> policies;
};

ShadWorld sim_world(std::size_t ell, std::size_t users, Rng& rng) {
  ShadWorld w;
  w.crs = std::make_shared<const shad::Crs>(shad::setup(16, 8, ell, rng));
  w.aux = shad::empty_aux(*w.crs);
  w.mpk = shad::master_public_key(*w.crs, w.aux);
  w.x = rng.bits(8);
  for (std::size_t k = 0; k < users; ++k) {
    auto p = rabe::random_policy_satisfied_by(w.x, 3, rng);
    auto pk = shad::sim_keygen(*w.crs, &w.aux, p, w.dict, rng);
    std::tie(w.mpk, w.aux) = shad::sim_regpk(*w.crs, w.aux, pk, p, w.dict);
    w.pks.push_back(pk);
    w.policies.push_back(p);
  }
  return w;
}

// 4. Reveal opens SimCT to every message.
Verdict criterion4() {
  Verdict v;
  std::size_t checks = 0;
  for (std::size_t ell = 1; ell <= 4; ++ell) {
    Rng rng(400 + ell);
    auto w = sim_world(ell, 3, rng);
    auto ct = shad::sim_ct(w.mpk, w.dict, w.x, rng, w.aux);
    for (std::size_t u = 0; u < w.pks.size(); ++u) {
      auto hsk = shad::update(*w.crs, w.aux, w.pks[u]);
      for (std::uint64_t m = 0; m < (1ULL << ell); ++m) {
        auto mu = BitString::from_uint(m, ell);
        auto out = shad::decrypt(shad::reveal(*w.crs, w.pks[u], w.dict, ct, mu), hsk, w.x, ct);
        v.require(out.is_ok() && out.value() == mu, "ell=" + std::to_string(ell) + " mu=" + mu.to_string());
        ++checks;
      }
    }
  }
  v.detail << " " << checks << " (ell, key, mu) openings, ell_m = 1..4, 3 keys each";
  return v;
}

// 5. D and D0 agree on valid ciphertexts; a crafted invalid one separates them.
Verdict criterion5() {
  constexpr std::size_t kCiphertexts = 1000;
  constexpr std::size_t kEll = 4;
  Verdict v;
  Rng rng(500);
  auto w = sim_world(kEll, 2, rng);
  const auto& grid = w.dict.at(w.pks[0]).keys;
  auto z = rng.bits(kEll);
  std::vector<rabe::SecretKey> chosen, left;
  for (std::size_t i = 0; i < kEll; ++i) {
    chosen.push_back(grid.at(i, z[i]));
    left.push_back(grid.at(i, 0));
  }
  auto d = io::obfuscate(shad::DecCircuit::left_or_right(w.crs, chosen, z));
  auto d0 = io::obfuscate(shad::DecCircuit::left_only(w.crs, left));
  auto hsk = shad::update(*w.crs, w.aux, w.pks[0]);
  std::size_t same = 0, opened = 0;
  for (std::size_t t = 0; t < kCiphertexts; ++t) {
    // Mostly satisfying attributes, some not, so both branches are exercised.
    BitString x = t % 4 == 3 ? rng.bits(8) : w.x;
    auto mu = rng.bits(kEll);
    auto ct = shad::encrypt(w.mpk, x, mu, rng, w.aux);
    auto a = shad::decrypt(d, hsk, x, ct);
    auto b = shad::decrypt(d0, hsk, x, ct);
    same += a == b;
    opened += a.is_ok() && a.value() == mu;
  }
  v.detail << " identical on " << same << "/" << kCiphertexts << " (" << opened << " opened to mu)";
  v.require(same == kCiphertexts, "valid ciphertexts");

  // Slot (i, 0) holds 0 and slot (i, 1) holds 1 under a forged proof.
  auto crafted = shad::hybrid_ciphertext(w.mpk, w.dict, w.x, BitString(kEll), shad::HybridVariant::kHyb4, rng,
                                         w.aux, BitString(kEll));
  auto ones = BitString(kEll, true);
  std::vector<rabe::SecretKey> right;
  for (std::size_t i = 0; i < kEll; ++i) right.push_back(grid.at(i, 1));
  auto d_right = io::obfuscate(shad::DecCircuit::left_or_right(w.crs, right, ones));
  auto a = shad::decrypt(d_right, hsk, w.x, crafted);
  auto b = shad::decrypt(d0, hsk, w.x, crafted);
  bool diverged = a.is_ok() && b.is_ok() && a.value() != b.value();
  v.detail << "; invalid ciphertext: D=" << (a.is_ok() ? a.value().to_string() : "bottom")
           << " D0=" << (b.is_ok() ? b.value().to_string() : "bottom");
  v.require(diverged, "invalid ciphertext divergence");
  return v;
}

// 6. Hyb3 with z = z* xor mu equals Hyb4 byte for byte.
Verdict criterion6() {
  constexpr std::size_t kPairs = 500;
  constexpr std::size_t kEll = 4;
  Verdict v;
  Rng rng(600);
  auto w = sim_world(kEll, 2, rng);
  std::size_t equal = 0;
  for (std::size_t t = 0; t < kPairs; ++t) {
    auto mu = rng.bits(kEll);
    auto zs = rng.bits(kEll);
    std::uint64_t seed = rng.next_u64();
    Rng a(seed), b(seed);
    auto h3 = shad::hybrid_ciphertext(w.mpk, w.dict, w.x, mu, shad::HybridVariant::kHyb3, a, w.aux, zs ^ mu);
    auto h4 = shad::hybrid_ciphertext(w.mpk, w.dict, w.x, mu, shad::HybridVariant::kHyb4, b, w.aux, zs);
    equal += h3.serialize() == h4.serialize();
  }
  v.detail << " byte-identical " << equal << "/" << kPairs;
  v.require(equal == kPairs, "hybrids");
  return v;
}

// Independent residual computation from qstate's own Born-rule output.
qstate::Distribution qstate_ced(SchemeTag scheme, std::size_t lambda) {
  qstate::Distribution d("residual");
  Rng rng(7);
  auto keys = sig::gen(lambda, rng);
  std::vector<std::size_t> wires(lambda);
  std::iota(wires.begin(), wires.end(), 0);
  double w = std::pow(4.0, -static_cast<double>(lambda));
  for (std::uint64_t t = 0; t < (1ULL << lambda); ++t)
    for (std::uint64_t xv = 0; xv < (1ULL << lambda); ++xv) {
      auto reg = qstate::bb84_prepare(BitString::from_uint(xv, lambda), BasisString(BitString::from_uint(t, lambda)));
      qstate::Distribution out;
      if (scheme == SchemeTag::kPriVCED) {
        out = qstate::outcome_distribution(reg, BasisString::hadamard(lambda));
      } else {
        reg = qstate::apply_xor_map(reg, protocols::sign_map(keys.sigk));
        out = qstate::outcome_distribution(reg, wires, BasisString::computational(lambda));
      }
      for (const auto& [k, p] : out.masses()) d.add("handle:opaque|cert:" + k, w * p);
    }
  return d;
}

double max_mass_gap(const qstate::Distribution& a, const qstate::Distribution& b) {
  double gap = 0;
  for (const auto& [k, p] : a.masses()) gap = std::max(gap, std::abs(p - b.prob(k)));
  for (const auto& [k, p] : b.masses()) gap = std::max(gap, std::abs(p - a.prob(k)));
  return gap;
}

// 7. Exact everlasting check at lambda = 6.
Verdict criterion7() {
  constexpr std::size_t kLambda = 6;
  Verdict v;
  for (auto s : {SchemeTag::kPriVCED, SchemeTag::kPubVCED}) {
    auto d0 = games::exact_ced_residual(s, 0, kLambda);
    auto d1 = games::exact_ced_residual(s, 1, kLambda);
    double td = qstate::distribution_trace_distance(d0, d1);
    double gap = max_mass_gap(d0, qstate_ced(s, kLambda));
    v.detail << " " << name(s) << " TD=" << td << " (enumeration vs qstate gap " << gap << ")";
    v.require(td <= kExactTol, name(s) + " TD");
    v.require(gap <= kExactTol, name(s) + " enumeration cross-check");
  }
  for (auto var : {games::CelVariant::kPrivate, games::CelVariant::kPublic}) {
    double td = qstate::distribution_trace_distance(games::exact_cel_residual(var, 0, kLambda),
                                                    games::exact_cel_residual(var, 1, kLambda));
    const char* label = var == games::CelVariant::kPrivate ? "CEL-private" : "CEL-public";
    v.detail << " " << label << " TD=" << td;
    v.require(td <= kExactTol, label);
  }
  v.detail << " (idealized-hiding handle)";
  return v;
}

// 8. One-shot property of PubVCD.
Verdict criterion8() {
  constexpr std::size_t kTrials = 1000;
  constexpr std::size_t kPublicChecks = 200;
  Verdict v;
  Rng rng(800);
  auto sys = System::setup(SchemeTag::kPubVCD, params(16, 1), rng);
  BitString anchor = rng.bits(8);
  auto u = sys.keygen(rabe::random_policy_satisfied_by(anchor, 3, rng), rng);
  sys.register_key(u.pk, u.policy);
  auto hsk = sys.update(u.pk);

  std::size_t rejected_delete = 0;
  for (std::size_t t = 0; t < kTrials; ++t) {
    auto x = satisfying(u.policy, 8, rng);
    auto enc = sys.encrypt(x, rng.bits(1), rng);
    if (!sys.decrypt(u.sk, hsk, x, enc.ct, rng).is_ok()) continue;
    try {
      System::erase(enc.ct, rng);
    } catch (const Error& e) {
      rejected_delete += e.code() == Errc::kOneShotConsumed;
    }
  }
  std::size_t rejected_double = 0;
  auto crs = oss::setup(rng);
  for (std::size_t t = 0; t < kTrials; ++t) {
    auto kp = oss::keygen(crs, rng);
    bool first = rng.bit();
    kp.sk.sign(first);
    try {
      kp.sk.sign(rng.bit());
    } catch (const Error& e) {
      rejected_double += e.code() == Errc::kOneShotConsumed;
    }
  }
  std::size_t verified = 0;
  for (std::size_t t = 0; t < kPublicChecks; ++t) {
    auto enc = sys.encrypt(satisfying(u.policy, 8, rng), rng.bits(1), rng);
    protocols::VerificationKey published;
    published.scheme = SchemeTag::kPubVCD;
    published.oss_crs = enc.vk.oss_crs;
    published.oss_pk = enc.vk.oss_pk;
    auto cert = System::erase(enc.ct, rng);
    oss::Signature sigma{cert.payload.to_bytes()};
    verified += oss::verify(*published.oss_crs, *published.oss_pk, sigma, true) && System::verify(published, cert);
  }
  v.detail << " delete-after-decrypt rejected " << rejected_delete << "/" << kTrials << ", double-sign rejected "
           << rejected_double << "/" << kTrials << ", sigma_1 verified from (oss.crs, oss.pk) " << verified << "/"
           << kPublicChecks;
  v.require(rejected_delete == kTrials, "delete after decrypt");
  v.require(rejected_double == kTrials, "double sign");
  v.require(verified == kPublicChecks, "public verification");
  return v;
}

// 9. Directory scaling and one Update per epoch gap.
Verdict criterion9() {
  Verdict v;
  Rng rng(900);
  auto sys = System::setup(SchemeTag::kPriVCED, params(16, 1), rng);
  std::vector<protocols::AnyPublicKey> pks;
  std::size_t checked = 0;
  for (std::size_t n = 1; n <= 1024; n *= 2) {
    while (pks.size() < n) {
      auto u = sys.keygen(rabe::random_policy(8, 3, rng), rng);
      sys.register_key(u.pk, u.policy);
      pks.push_back(u.pk);
    }
    for (const auto& pk : pks) {
      std::size_t len = protocols::path_length(sys.update(pk));
      v.require(len == rabe::ceil_log2(n), "N=" + std::to_string(n));
      ++checked;
    }
  }
  v.detail << " path length = ceil(log2 N) for " << checked << " (N, key) pairs, N = 1..1024;";

  for (auto s : kAll)
    for (std::size_t gap_size : {1, 3, 8}) {
      constexpr std::size_t kGaps = 4;
      games::GameConfig c;
      c.params = params(16, 1);
      c.seed = 910 + gap_size;
      auto adv = games::make_epoch_gap(kGaps, gap_size);
      auto verdict = games::run_decryption_game(s, *adv, c);
      v.require(verdict.b == 1 && verdict.updates == kGaps,
                name(s) + " gap " + std::to_string(gap_size) + " updates=" + std::to_string(verdict.updates));
    }
  v.detail << " epoch gaps of 1, 3, 8 registrations: one Update each, all schemes";
  return v;
}

// 10. Game harness sanity.
Verdict criterion10() {
  constexpr std::size_t kTrials = 2000;
  Verdict v;
  auto run_arms = [&](const std::function<games::ExperimentResult(int, std::uint64_t)>& run, std::uint64_t base) {
    std::vector<games::ExperimentResult> r[2];
    for (int b : {0, 1})
      r[b] = games::run_trials(kTrials, 1, [&](std::size_t i) {
        return run(b, games::trial_seed(base + static_cast<std::uint64_t>(b), i));
      });
    return games::estimate_advantage(r[0], r[1]);
  };
  for (auto s : {SchemeTag::kPriVCD, SchemeTag::kPubVCD}) {
    auto est = run_arms(
        [&](int b, std::uint64_t seed) {
          games::GameConfig c;
          c.params = params(16, 1);
          c.seed = seed;
          auto adv = games::make_adversary("honest-deleter");
          return games::run_exp_cd(s, b, *adv, c);
        },
        1000 + static_cast<std::uint64_t>(s) * 2);
    v.detail << " Exp-CD/" << name(s) << " honest-deleter adv=" << est.advantage << " CI=[" << est.ci_low << ","
             << est.ci_high << "]";
    v.require(est.advantage <= kAdvantageBound, "Exp-CD " + name(s));
  }
  auto est = run_arms(
      [](int b, std::uint64_t seed) {
        games::GameConfig c;
        c.params = params(16, 4);
        c.seed = seed;
        auto adv = games::make_adversary("z-prober");
        return games::run_exp_shad(b, *adv, c);
      },
      1100);
  v.detail << " Exp-Shad z-prober adv=" << est.advantage << " CI=[" << est.ci_low << "," << est.ci_high << "]";
  v.require(est.advantage <= kAdvantageBound, "Exp-Shad z-prober");

  // Replay: every experiment kind, same seed twice.
  std::size_t replays = 0;
  auto same = [&](const std::string& a, const std::string& b, const std::string& what) {
    v.require(a == b && !a.empty(), "replay " + what);
    ++replays;
  };
  games::GameConfig c;
  c.params = params(16, 2);
  c.seed = 1200;
  for (auto s : kAll) {
    auto a1 = games::make_honest_mix(60), a2 = games::make_honest_mix(60);
    same(games::run_decryption_game(s, *a1, c).transcript.to_jsonl(),
         games::run_decryption_game(s, *a2, c).transcript.to_jsonl(), "decryption " + name(s));
    auto b1 = games::make_honest_mix(60), b2 = games::make_honest_mix(60);
    same(games::run_verification_game(s, *b1, c).transcript.to_jsonl(),
         games::run_verification_game(s, *b2, c).transcript.to_jsonl(), "verification " + name(s));
    for (const char* adv : {"honest-deleter", "fuzzer"}) {
      auto x1 = games::make_adversary(adv), x2 = games::make_adversary(adv);
      bool ced = protocols::is_everlasting(s);
      auto r1 = ced ? games::run_exp_ced(s, 1, *x1, c) : games::run_exp_cd(s, 1, *x1, c);
      auto r2 = ced ? games::run_exp_ced(s, 1, *x2, c) : games::run_exp_cd(s, 1, *x2, c);
      same(r1.transcript.to_jsonl(), r2.transcript.to_jsonl(), name(s) + " " + adv);
    }
  }
  for (int b : {0, 1}) {
    auto x1 = games::make_adversary("functional-consistency"), x2 = games::make_adversary("functional-consistency");
    same(games::run_exp_shad(b, *x1, c).transcript.to_jsonl(), games::run_exp_shad(b, *x2, c).transcript.to_jsonl(),
         "exp-shad");
    for (auto var : {games::CelVariant::kPrivate, games::CelVariant::kPublic}) {
      auto y1 = games::make_cel_adversary("honest-measurer"), y2 = games::make_cel_adversary("honest-measurer");
      games::CelConfig cc;
      cc.seed = 1300;
      same(games::run_cel_experiment(var, b, *y1, cc).transcript.to_jsonl(),
           games::run_cel_experiment(var, b, *y2, cc).transcript.to_jsonl(), "cel");
    }
  }
  v.detail << "; " << replays << " replayed transcripts byte-identical";
  return v;
}

// 11. Branch representation against the dense statevector.
Verdict criterion11() {
  constexpr std::size_t kCases = 500;
  constexpr std::size_t kMaxWires = 10;
  constexpr std::size_t kSteps = 8;
  Verdict v;
  Rng rng(1100);
  double worst = 0;
  std::size_t agreed = 0;
  for (std::size_t t = 0; t < kCases; ++t) {
    double dev = oracle::run_lockstep(rng, kMaxWires, kSteps);
    worst = std::max(worst, dev);
    agreed += dev <= kOracleTol;
  }
  v.detail << " " << agreed << "/" << kCases << " random sequences (n <= " << kMaxWires << ", " << kSteps
           << " ops each), worst deviation " << worst;
  v.require(agreed == kCases, "oracle agreement");
  return v;
}

struct Criterion {
  int id;
  const char* title;
  Verdict (*run)();
};

}  // namespace

int main(int argc, char** argv) {
  const Criterion all[] = {
      {1, "end-to-end correctness", criterion1},
      {2, "verification correctness", criterion2},
      {3, "computational-measurer acceptance 2^-h", criterion3},
      {4, "Reveal equivocation", criterion4},
      {5, "D and D0 functional equivalence", criterion5},
      {6, "change of variables Hyb3 = Hyb4", criterion6},
      {7, "exact everlasting trace distance", criterion7},
      {8, "PubVCD one-shot property", criterion8},
      {9, "directory scaling", criterion9},
      {10, "game harness sanity", criterion10},
      {11, "dense oracle agreement", criterion11},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    auto t0 = Clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    std::printf("%s criterion %2d: %s:%s (%.1fs)\n", v.pass ? "PASS" : "FAIL", c.id, c.title,
                v.detail.str().c_str(), seconds_since(t0));
    std::fflush(stdout);
    failures += !v.pass;
  }
  return failures == 0 ? 0 : 1;
}
