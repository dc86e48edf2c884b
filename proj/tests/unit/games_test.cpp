// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "rcd/error.hpp"
#include "rcd/games/games.hpp"
#include "rcd/primitives/sig.hpp"

namespace rcd::games {
namespace {

using rabe::Policy;

constexpr SchemeTag kAll[] = {SchemeTag::kPriVCD, SchemeTag::kPubVCD, SchemeTag::kPriVCED, SchemeTag::kPubVCED};

GameConfig config(std::size_t lambda, std::size_t ell, std::uint64_t seed) {
  GameConfig c;
  c.params.lambda = lambda;
  c.params.tau = 8;
  c.params.message_bits = ell;
  c.seed = seed;
  return c;
}

std::vector<ExperimentResult> trials(std::size_t n, std::uint64_t base, const std::function<ExperimentResult(std::uint64_t)>& run) {
  return run_trials(n, 1, [&](std::size_t i) { return run(trial_seed(base, i)); });
}

int parity(std::uint32_t v) { return __builtin_popcount(v) & 1; }

// Independent oracle for the honest-deleter residual: prepares every
// |x>_theta with qstate and asks for the exact outcome distribution of the
// honest deletion measurement.
qstate::Distribution oracle_ced(SchemeTag scheme, int b, std::size_t lambda, HandleMode mode) {
  qstate::Distribution d("residual");
  Rng rng(99);
  auto keys = sig::gen(lambda, rng);
  std::vector<std::size_t> message_wires(lambda);
  std::iota(message_wires.begin(), message_wires.end(), 0);
  double w = 1.0 / std::pow(4.0, static_cast<double>(lambda));
  for (std::uint32_t t = 0; t < (1U << lambda); ++t) {
    for (std::uint32_t xv = 0; xv < (1U << lambda); ++xv) {
      auto x = BitString::from_uint(xv, lambda);
      BasisString theta(BitString::from_uint(t, lambda));
      auto reg = qstate::bb84_prepare(x, theta);
      qstate::Distribution out;
      int masked = 0;
      if (scheme == SchemeTag::kPriVCED) {
        out = qstate::outcome_distribution(reg, BasisString::hadamard(lambda));
        masked = b ^ parity(xv & ~t & ((1U << lambda) - 1));
      } else {
        reg = qstate::apply_xor_map(reg, protocols::sign_map(keys.sigk));
        out = qstate::outcome_distribution(reg, message_wires, BasisString::computational(lambda));
        masked = b ^ parity(xv & t);
      }
      std::string prefix = mode == HandleMode::kOpaque
                               ? "handle:opaque|"
                               : "handle:theta=" + theta.to_string() + ",masked=" + std::to_string(masked) + "|";
      for (const auto& [k, p] : out.masses()) d.add(prefix + "cert:" + k, w * p);
    }
  }
  return d;
}

void expect_same(const qstate::Distribution& a, const qstate::Distribution& b) {
  ASSERT_EQ(a.masses().size(), b.masses().size());
  for (const auto& [k, p] : a.masses()) EXPECT_NEAR(p, b.prob(k), 1e-12) << k;
}

// Admissibility

TEST(Admissibility, TableDriven) {
  auto x = BitString::from_string("10110000");
  PolicyDictionary d;
  d["aa"] = {Policy::var(0)};
  d["bb"] = {Policy::var(1)};
  d["cc"] = {Policy::var(1), Policy::var(2)};
  struct Case {
    std::vector<std::string> corrupted;
    bool ok;
    std::string key;
  };
  for (const auto& c : std::vector<Case>{{{}, true, ""}, {{"bb"}, true, ""}, {{"bb", "cc"}, false, "cc"}}) {
    auto r = admissibility_check(d, c.corrupted, x);
    EXPECT_EQ(r.ok, c.ok);
    EXPECT_EQ(r.key, c.key);
  }
  EXPECT_FALSE(admissibility_check(d, {"aa"}, x).ok);
}

// Statistics

TEST(Advantage, SymmetricIsZero) {
  std::vector<int> a{1, 0, 1, 0, 1, 1, 0, 0};
  auto e = estimate_advantage(a, a);
  EXPECT_DOUBLE_EQ(e.advantage, 0.0);
  EXPECT_DOUBLE_EQ(e.ci_low, 0.0);
  EXPECT_GT(e.ci_high, 0.0);
}

TEST(Advantage, DisjointIsOne) {
  auto e = estimate_advantage(std::vector<int>(50, 0), std::vector<int>(50, 1));
  EXPECT_DOUBLE_EQ(e.advantage, 1.0);
  EXPECT_DOUBLE_EQ(e.ci_high, 1.0);
  // Wilson lower limit for 50/50 is 0.928650; Newcombe combines two of them.
  double w = 1.0 - 0.928650;
  EXPECT_NEAR(e.ci_low, 1.0 - std::sqrt(2 * w * w), 1e-5);
}

TEST(Advantage, BiasedCoin) {
  Rng rng(5);
  std::vector<int> o0, o1;
  for (int i = 0; i < 20000; ++i) {
    o0.push_back(rng.uniform01() < 0.4);
    o1.push_back(rng.uniform01() < 0.6);
  }
  auto e = estimate_advantage(o0, o1);
  EXPECT_LE(e.ci_low, 0.2);
  EXPECT_GE(e.ci_high, 0.2);
  // Standard error of the difference is about 0.0049.
  EXPECT_NEAR(e.advantage, 0.2, 4 * std::sqrt(2 * 0.24 / 20000));
}

TEST(Advantage, WilsonMatchesClosedForm) {
  auto [lo, hi] = wilson_interval(0, 10);
  EXPECT_DOUBLE_EQ(lo, 0.0);
  double z2 = 1.96 * 1.96;
  EXPECT_NEAR(hi, z2 / 10 / (1 + z2 / 10), 1e-12);
}

TEST(Advantage, NeedsBothSides) { EXPECT_THROW(estimate_advantage(std::vector<int>{}, std::vector<int>{1}), Error); }

TEST(Trials, ParallelKeepsOrder) {
  auto run = [](std::size_t i) {
    ExperimentResult r;
    r.b = static_cast<int>(i % 2);
    r.trials = i;
    return r;
  };
  auto serial = run_trials(37, 1, run);
  auto parallel = run_trials(37, 4, run);
  for (std::size_t i = 0; i < 37; ++i) EXPECT_EQ(serial[i].trials, parallel[i].trials);
}

TEST(Trials, SeedsDiffer) {
  EXPECT_NE(trial_seed(1, 0), trial_seed(1, 1));
  EXPECT_NE(trial_seed(1, 0), trial_seed(2, 0));
  EXPECT_EQ(trial_seed(7, 3), trial_seed(7, 3));
}

// Correctness games

class GameSchemes : public testing::TestWithParam<SchemeTag> {};
std::string scheme_name(const testing::TestParamInfo<SchemeTag>& info) {
  return std::string(protocols::to_string(info.param));
}

TEST_P(GameSchemes, DecryptionGameHonestMix) {
  auto adv = make_honest_mix(200);
  auto v = run_decryption_game(GetParam(), *adv, config(16, 2, 11));
  EXPECT_EQ(v.b, 1);
  EXPECT_EQ(v.queries, 200U);
  EXPECT_GT(v.decryptions, 0U);
  EXPECT_EQ(v.verifications, 0U);
}

TEST_P(GameSchemes, DecryptionGameFaultHalts) {
  std::optional<protocols::HybridCiphertext> first;
  GameHooks hooks;
  hooks.after_encrypt = [&](std::size_t j, protocols::HybridCiphertext& ct) {
    if (j == 1) first = ct;
    if (j == 2) ct = *first;
  };
  auto adv = make_epoch_gap(2, 1);
  auto v = run_decryption_game(GetParam(), *adv, config(16, 8, 12), hooks);
  EXPECT_EQ(v.b, 0);
  EXPECT_NE(v.transcript.events().back().value("reason", ""), "");
}

TEST_P(GameSchemes, EpochGapOneUpdatePerGap) {
  for (std::size_t gaps : {1, 3}) {
    auto adv = make_epoch_gap(gaps, 2);
    auto v = run_decryption_game(GetParam(), *adv, config(16, 2, 13), {});
    EXPECT_EQ(v.b, 1);
    EXPECT_EQ(v.updates, gaps);
    EXPECT_EQ(v.get_updates, gaps);
  }
}

TEST_P(GameSchemes, VerificationGameHonest) {
  auto adv = make_honest_mix(120);
  auto v = run_verification_game(GetParam(), *adv, config(16, 2, 14));
  EXPECT_EQ(v.b, 1);
  EXPECT_GT(v.verifications, 0U);
  EXPECT_EQ(v.decryptions, 0U);
}

TEST_P(GameSchemes, VerificationGameCorruptedCertHalts) {
  GameHooks hooks;
  hooks.after_delete = [](std::size_t, DeletionCert& cert) {
    for (std::size_t i = 0; i < cert.payload.size(); ++i) cert.payload.flip(i);
    if (cert.signature) cert.signature->flip(0);
  };
  auto adv = make_epoch_gap(1, 1);
  auto v = run_verification_game(GetParam(), *adv, config(16, 2, 15), hooks);
  EXPECT_EQ(v.b, 0);
}

TEST_P(GameSchemes, CorrectnessTranscriptReplays) {
  auto a = make_honest_mix(40);
  auto b = make_honest_mix(40);
  auto v1 = run_decryption_game(GetParam(), *a, config(8, 2, 16));
  auto v2 = run_decryption_game(GetParam(), *b, config(8, 2, 16));
  EXPECT_EQ(v1.transcript.to_jsonl(), v2.transcript.to_jsonl());
}

INSTANTIATE_TEST_SUITE_P(Games, GameSchemes, testing::ValuesIn(kAll), scheme_name);

class MisbehavingPlayer : public CorrectnessAdversary {
 public:
  explicit MisbehavingPlayer(int mode) : mode_(mode) {}
  std::string_view name() const override { return "misbehaving"; }
  void play(CorrectnessOracle& o, Rng& rng) override {
    auto x = rng.bits(8);
    o.register_target(rabe::random_policy_satisfied_by(x, 2, rng));
    EXPECT_EQ(o.register_target(Policy::var(0)), std::nullopt);
    if (mode_ == 0) o.decrypt(1);
    auto j = o.encrypt(*o.target_index(), rng.bits(2), x);
    ASSERT_TRUE(j.has_value());
    if (mode_ == 1) o.verify(*j);
    if (mode_ == 2) o.encrypt(o.registrations() + 1, rng.bits(2), x);
  }

 private:
  int mode_;
};

TEST(CorrectnessGames, ProtocolViolations) {
  for (int mode : {0, 1, 2}) {
    MisbehavingPlayer p(mode);
    EXPECT_THROW(
        try { run_decryption_game(SchemeTag::kPriVCED, p, config(8, 2, 17)); } catch (const Error& e) {
          EXPECT_EQ(e.code(), Errc::kAdversaryProtocolViolation);
          throw;
        },
        Error);
  }
}

TEST(CorrectnessGames, RepeatedVerifyIsViolation) {
  struct Twice : CorrectnessAdversary {
    std::string_view name() const override { return "twice"; }
    void play(CorrectnessOracle& o, Rng& rng) override {
      auto x = rng.bits(8);
      o.register_target(rabe::random_policy_satisfied_by(x, 2, rng));
      auto j = o.encrypt(1, rng.bits(2), x);
      o.verify(*j);
      o.verify(*j);
    }
  } twice;
  EXPECT_THROW(run_verification_game(SchemeTag::kPubVCED, twice, config(8, 2, 18)), Error);
}

TEST(CorrectnessGames, EncryptWithoutTargetIsBottom) {
  struct NoTarget : CorrectnessAdversary {
    std::string_view name() const override { return "no-target"; }
    void play(CorrectnessOracle& o, Rng& rng) override {
      EXPECT_EQ(o.encrypt(0, rng.bits(2), rng.bits(8)), std::nullopt);
      auto x = rng.bits(8);
      o.register_target(rabe::random_policy_rejecting(x, 2, rng));
      EXPECT_EQ(o.encrypt(1, rng.bits(2), x), std::nullopt);
    }
  } p;
  EXPECT_EQ(run_decryption_game(SchemeTag::kPriVCED, p, config(8, 2, 19)).b, 1);
}

// Exp-CD

std::vector<ExperimentResult> cd_trials(SchemeTag s, const char* adv, int b, std::size_t n, GameConfig c) {
  return trials(n, c.seed * 2 + static_cast<std::uint64_t>(b), [&](std::uint64_t seed) {
    auto a = make_adversary(adv);
    c.seed = seed;
    return run_exp_cd(s, b, *a, c);
  });
}

TEST(ExpCd, HonestDeleterHasNoAdvantage) {
  for (auto s : {SchemeTag::kPriVCD, SchemeTag::kPubVCD}) {
    auto c = config(16, 1, 21);
    auto r0 = cd_trials(s, "honest-deleter", 0, 600, c);
    auto r1 = cd_trials(s, "honest-deleter", 1, 600, c);
    for (const auto& r : r0) ASSERT_FALSE(r.is_bottom());
    for (const auto& r : r1) ASSERT_FALSE(r.is_bottom());
    auto e = estimate_advantage(r0, r1);
    // 4 standard errors of a fair-coin difference at n = 600.
    EXPECT_LE(e.advantage, 4 * std::sqrt(0.5 / 600)) << protocols::to_string(s);
  }
}

TEST(ExpCd, DecryptFirstIsInadmissible) {
  for (auto s : {SchemeTag::kPriVCD, SchemeTag::kPubVCD}) {
    auto a = make_adversary("decrypt-first");
    try {
      run_exp_cd(s, 0, *a, config(8, 2, 22));
      ADD_FAILURE() << "expected AdmissibilityError";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kAdmissibilityError);
    }
  }
}

TEST(ExpCd, ForgedCertBottomRate) {
  // PriVCD: a random certificate matches the theta = 1 positions with
  // probability 2^-h for the challenge's own h.
  const std::size_t n = 3000;
  auto r = cd_trials(SchemeTag::kPriVCD, "cert-forger", 1, n, config(8, 1, 23));
  double expected = 0, var = 0, bottoms = 0;
  for (const auto& t : r) {
    ASSERT_TRUE(t.hadamard_count.has_value());
    double p = std::ldexp(1.0, -static_cast<int>(*t.hadamard_count));
    expected += 1 - p;
    var += p * (1 - p);
    bottoms += t.is_bottom();
  }
  EXPECT_NEAR(bottoms, expected, 4 * std::sqrt(var));
  // PubVCD: a random one-shot signature never verifies.
  for (const auto& t : cd_trials(SchemeTag::kPubVCD, "cert-forger", 0, 50, config(8, 1, 24)))
    EXPECT_TRUE(t.is_bottom());
}

TEST(ExpCd, RevealOnlyAfterValidCert) {
  for (const char* adv : {"honest-deleter", "cert-forger"}) {
    auto a = make_adversary(adv);
    auto r = run_exp_cd(SchemeTag::kPriVCD, 1, *a, config(16, 2, 25));
    const auto& ev = r.transcript.events();
    std::vector<std::string> names;
    for (const auto& e : ev) names.push_back(e["event"]);
    auto cert = std::find(names.begin(), names.end(), "certificate");
    ASSERT_NE(cert, names.end());
    bool valid = ev[cert - names.begin()]["valid"];
    bool revealed = std::find(names.begin(), names.end(), "reveal") != names.end();
    EXPECT_EQ(valid, revealed) << adv;
    if (revealed) EXPECT_EQ(*(cert + 1), "reveal");
    EXPECT_EQ(names.back(), "verdict");
  }
}

TEST(ExpCd, TranscriptReplaysByteExact) {
  for (auto s : {SchemeTag::kPriVCD, SchemeTag::kPubVCD}) {
    auto a = make_adversary("fuzzer");
    auto b = make_adversary("fuzzer");
    auto r1 = run_exp_cd(s, 1, *a, config(8, 2, 26));
    auto r2 = run_exp_cd(s, 1, *b, config(8, 2, 26));
    auto text = r1.transcript.to_jsonl();
    EXPECT_EQ(text, r2.transcript.to_jsonl());
    EXPECT_EQ(GameTranscript::from_jsonl(text).to_jsonl(), text);
  }
}

TEST(ExpCd, RejectsEverlastingSchemes) {
  auto a = make_adversary("honest-deleter");
  EXPECT_THROW(run_exp_cd(SchemeTag::kPriVCED, 0, *a, config(8, 1, 27)), Error);
  EXPECT_THROW(run_exp_ced(SchemeTag::kPubVCD, 0, *a, config(8, 1, 27)), Error);
}

TEST(ExpCd, FuzzerNeverBreaksTheHarness) {
  for (std::uint64_t i = 0; i < 60; ++i) {
    auto s = i % 2 ? SchemeTag::kPriVCD : SchemeTag::kPubVCD;
    auto a = make_adversary("fuzzer");
    auto r = run_exp_cd(s, static_cast<int>(i % 2), *a, config(8, 2, trial_seed(28, i)));
    EXPECT_EQ(r.transcript.events().back()["event"], "verdict");
  }
}

// Exp-CED

TEST(ExpCed, ExactMatchesQstateOracle) {
  for (auto s : {SchemeTag::kPriVCED, SchemeTag::kPubVCED})
    for (auto mode : {HandleMode::kOpaque, HandleMode::kOpened})
      for (int b : {0, 1}) expect_same(exact_ced_residual(s, b, 4, mode), oracle_ced(s, b, 4, mode));
}

TEST(ExpCed, ExactTraceDistanceZeroBehindHandle) {
  for (auto s : {SchemeTag::kPriVCED, SchemeTag::kPubVCED}) {
    auto d0 = exact_ced_residual(s, 0, 6);
    auto d1 = exact_ced_residual(s, 1, 6);
    EXPECT_NEAR(d0.total(), 1.0, 1e-12);
    EXPECT_NEAR(qstate::distribution_trace_distance(d0, d1), 0.0, 1e-9);
  }
}

TEST(ExpCed, OpenedHandleLeaksOnlyTheDegenerateBasis) {
  for (auto s : {SchemeTag::kPriVCED, SchemeTag::kPubVCED})
    for (std::size_t lambda : {3, 6}) {
      double td = qstate::distribution_trace_distance(exact_ced_residual(s, 0, lambda, HandleMode::kOpened),
                                                      exact_ced_residual(s, 1, lambda, HandleMode::kOpened));
      EXPECT_NEAR(td, std::ldexp(1.0, -static_cast<int>(lambda)), 1e-12);
    }
}

TEST(ExpCed, MonteCarloAgreesWithExact) {
  for (auto s : {SchemeTag::kPriVCED, SchemeTag::kPubVCED}) {
    auto c = config(6, 1, 31 + static_cast<int>(s));
    std::vector<ExperimentResult> r[2];
    for (int b : {0, 1})
      r[b] = trials(3000, c.seed * 2 + static_cast<std::uint64_t>(b), [&](std::uint64_t seed) {
        auto a = make_adversary("honest-deleter");
        auto cc = c;
        cc.seed = seed;
        return run_exp_ced(s, b, *a, cc);
      });
    auto agree = td_agreement(exact_ced_residual(s, 0, 6), exact_ced_residual(s, 1, 6), r[0], r[1]);
    EXPECT_TRUE(agree.agree) << protocols::to_string(s) << " max z " << agree.max_z;
    EXPECT_NEAR(agree.exact, 0.0, 1e-9);
  }
}

TEST(ExpCed, InvalidCertIsBottomAndNothingRevealed) {
  for (auto s : {SchemeTag::kPriVCED, SchemeTag::kPubVCED}) {
    auto a = make_adversary("cert-forger");
    auto r = run_exp_ced(s, 0, *a, config(16, 1, 33));
    EXPECT_TRUE(r.is_bottom());
    for (const auto& e : r.transcript.events()) EXPECT_NE(e["event"], "reveal");
  }
  auto a = make_adversary("honest-deleter");
  auto r = run_exp_ced(SchemeTag::kPriVCED, 1, *a, config(16, 1, 34));
  ASSERT_EQ(r.output, ExperimentResult::Output::kResidual);
  for (const auto& e : r.transcript.events()) EXPECT_NE(e["event"], "reveal");
}

class VkProbe final : public Adversary {
 public:
  std::string_view name() const override { return "vk-probe"; }
  ChallengeChoice challenge_choice(OracleHandle&, Rng& rng) override { return {BitString(1), BitString(1), rng.bits(8)}; }
  DeletionCert deletion_phase(OracleHandle&, ChallengeView& view, Rng& rng) override {
    saw_vk = view.vk != nullptr;
    return protocols::System::erase(*view.ct, rng);
  }
  bool saw_vk = false;
};

TEST(ExpCed, PublicVariantHandsOverVk) {
  VkProbe pub, priv;
  EXPECT_EQ(run_exp_ced(SchemeTag::kPubVCED, 0, pub, config(8, 1, 35)).output, ExperimentResult::Output::kResidual);
  run_exp_ced(SchemeTag::kPriVCED, 0, priv, config(8, 1, 35));
  EXPECT_TRUE(pub.saw_vk);
  EXPECT_FALSE(priv.saw_vk);
}

TEST(ExpCed, ComputationalMeasurerAcceptance) {
  const std::size_t n = 4000;
  auto r = trials(n, 36, [](std::uint64_t seed) {
    auto a = make_adversary("computational-measurer");
    return run_exp_ced(SchemeTag::kPriVCED, 0, *a, config(8, 1, seed));
  });
  double expected = 0, var = 0, accepted = 0;
  for (const auto& t : r) {
    double p = std::ldexp(1.0, -static_cast<int>(*t.hadamard_count));
    expected += p;
    var += p * (1 - p);
    accepted += !t.is_bottom();
  }
  EXPECT_NEAR(accepted, expected, 4 * std::sqrt(var));
}

// Exp-Shad

TEST(ExpShad, FunctionalConsistencyInBothWorlds) {
  for (int b : {0, 1})
    for (std::uint64_t i = 0; i < 20; ++i) {
      auto a = make_adversary("functional-consistency");
      auto r = run_exp_shad(b, *a, config(8, 4, trial_seed(41, i)));
      EXPECT_TRUE(r.bit) << "world " << b << " trial " << i;
    }
}

TEST(ExpShad, ZProberHasNoAdvantage) {
  std::vector<ExperimentResult> r[2];
  for (int b : {0, 1})
    r[b] = trials(1000, 42 + static_cast<std::uint64_t>(b), [&](std::uint64_t seed) {
      auto a = make_adversary("z-prober");
      return run_exp_shad(b, *a, config(8, 4, seed));
    });
  EXPECT_LE(estimate_advantage(r[0], r[1]).advantage, 4 * std::sqrt(0.5 / 1000));
}

TEST(ExpShad, InadmissibleCorruption) {
  auto a = make_adversary("decrypt-first");
  for (int b : {0, 1}) {
    try {
      run_exp_shad(b, *a, config(8, 2, 43));
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kAdmissibilityError);
    }
  }
}

TEST(ExpShad, SimulatedWorldNeedsAnHonestKey) {
  struct Lonely final : Adversary {
    std::string_view name() const override { return "lonely"; }
    ChallengeChoice challenge_choice(OracleHandle&, Rng& rng) override {
      return {rng.bits(2), rng.bits(2), rng.bits(8)};
    }
  } a;
  EXPECT_THROW(run_exp_shad(1, a, config(8, 2, 44)), Error);
  EXPECT_EQ(run_exp_shad(0, a, config(8, 2, 44)).output, ExperimentResult::Output::kBit);
}

TEST(ExpShad, TranscriptReplays) {
  for (int b : {0, 1}) {
    auto a = make_adversary("functional-consistency");
    auto c = make_adversary("functional-consistency");
    EXPECT_EQ(run_exp_shad(b, *a, config(8, 2, 45)).transcript.to_jsonl(),
              run_exp_shad(b, *c, config(8, 2, 45)).transcript.to_jsonl());
  }
}

// CEL experiments

TEST(Cel, HonestMeasurerAlwaysAccepted) {
  for (auto v : {CelVariant::kPrivate, CelVariant::kPublic})
    for (std::uint64_t i = 0; i < 200; ++i) {
      auto a = make_cel_adversary("honest-measurer");
      CelConfig c;
      c.seed = trial_seed(51, i);
      EXPECT_FALSE(run_cel_experiment(v, static_cast<int>(i % 2), *a, c).is_bottom());
    }
}

TEST(Cel, DegenerateBasis) {
  CelConfig c;
  c.seed = 52;
  c.theta = BasisString::computational(6);
  for (auto v : {CelVariant::kPrivate, CelVariant::kPublic}) {
    auto a = make_cel_adversary("honest-measurer");
    auto r0 = run_cel_experiment(v, 0, *a, c);
    auto r1 = run_cel_experiment(v, 1, *a, c);
    EXPECT_FALSE(r0.is_bottom());
    EXPECT_FALSE(r1.is_bottom());
    // Empty mask: the hidden bit is b itself.
    EXPECT_EQ(r0.transcript.events().front()["beta"], 0);
    EXPECT_EQ(r1.transcript.events().front()["beta"], 1);
  }
}

TEST(Cel, HadamardMeasurerRejectedInPrivateVariant) {
  std::size_t bottoms = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto a = make_cel_adversary("hadamard-measurer");
    CelConfig c;
    c.seed = trial_seed(53, i);
    bottoms += run_cel_experiment(CelVariant::kPrivate, 0, *a, c).is_bottom();
  }
  // Accepted with probability (3/4)^6 per trial.
  double p = std::pow(0.75, 6);
  EXPECT_NEAR(static_cast<double>(bottoms), 200 * (1 - p), 4 * std::sqrt(200 * p * (1 - p)));
}

TEST(Cel, ExactTraceDistance) {
  for (auto v : {CelVariant::kPrivate, CelVariant::kPublic}) {
    EXPECT_NEAR(qstate::distribution_trace_distance(exact_cel_residual(v, 0, 6), exact_cel_residual(v, 1, 6)), 0.0,
                1e-9);
    EXPECT_NEAR(qstate::distribution_trace_distance(exact_cel_residual(v, 0, 6, HandleMode::kOpened),
                                                    exact_cel_residual(v, 1, 6, HandleMode::kOpened)),
                1.0 / 64, 1e-12);
  }
}

TEST(Cel, MonteCarloAgreesWithExact) {
  std::vector<ExperimentResult> r[2];
  for (int b : {0, 1})
    r[b] = trials(3000, 54 + static_cast<std::uint64_t>(b), [&](std::uint64_t seed) {
      auto a = make_cel_adversary("honest-measurer");
      CelConfig c;
      c.seed = seed;
      return run_cel_experiment(CelVariant::kPublic, b, *a, c);
    });
  auto agree = td_agreement(exact_cel_residual(CelVariant::kPublic, 0, 6),
                            exact_cel_residual(CelVariant::kPublic, 1, 6), r[0], r[1]);
  EXPECT_TRUE(agree.agree) << agree.max_z;
}

TEST(Cel, ExactRejectsLargeLambda) { EXPECT_THROW(exact_cel_residual(CelVariant::kPrivate, 0, 9), Error); }

// Registry

TEST(Registry, NamesResolve) {
  for (const auto& n : adversary_names()) EXPECT_EQ(make_adversary(n)->name(), n);
  EXPECT_THROW(make_adversary("oracle-breaker"), Error);
  EXPECT_THROW(make_cel_adversary("nobody"), Error);
  for (auto e : {Experiment::kDecryptionGame, Experiment::kVerificationGame, Experiment::kExpCd, Experiment::kExpCed,
                 Experiment::kExpShad, Experiment::kCel})
    EXPECT_EQ(experiment_from_string(to_string(e)), e);
}

}  // namespace
}  // namespace rcd::games
