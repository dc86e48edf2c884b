// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <string>
#include <vector>

#include "rcd/error.hpp"
#include "rcd/games/games.hpp"
#include "rcd/primitives/oss.hpp"
#include "rcd/primitives/sig.hpp"

namespace rcd::games {
namespace {

using protocols::System;

constexpr std::size_t kPolicyDepth = 2;

/// Scaffolding shared by the built-in strategies: picks X* at setup, keeps the
/// challenge messages and what it did at deletion time.
class Scripted : public Adversary {
 public:
  void on_setup(const SetupInfo& info, Rng& rng) override {
    info_ = info;
    x_ = rng.bits(info.params.tau);
  }

  ChallengeChoice challenge_choice(OracleHandle&, Rng& rng) override {
    std::size_t m = info_.params.message_bits;
    mu0_ = rng.bits(m);
    mu1_ = mu0_;
    if (m > 0) mu1_.flip(rng.below(m));
    return {mu0_, mu1_, x_};
  }

  DeletionCert deletion_phase(OracleHandle&, ChallengeView& view, Rng& rng) override {
    auto cert = System::erase(*view.ct, rng);
    remember(cert, view);
    return cert;
  }

  bool guess(OracleHandle& oracle, const ChallengeView& view, const std::vector<RevealedKey>& keys,
             Rng& rng) override {
    return decrypting_guess(oracle, view, keys, rng);
  }

  ResidualView residual() const override {
    ResidualView v;
    v.label = "cert:" + payload_.to_string();
    v.classical = {{"cert", payload_.to_string()}};
    v.retained = retained_;
    return v;
  }

 protected:
  void remember(const DeletionCert& cert, const ChallengeView& view) {
    payload_ = cert.payload;
    retained_ = view.ct->quantum;
  }

  /// Decrypts with every revealed key whose policy accepts X*; the first
  /// answer naming one of the two messages decides, otherwise a coin.
  bool decrypting_guess(OracleHandle& oracle, const ChallengeView& view, const std::vector<RevealedKey>& keys,
                        Rng& rng) {
    for (const auto& k : keys) {
      if (!k.policy.eval(view.x)) continue;
      DecryptResult<BitString> m = DecryptResult<BitString>::bottom();
      if (view.ct) {
        m = oracle.decrypt(k.sk, k.hsk, view.x, *view.ct, rng);
      } else if (view.shad_ct) {
        m = oracle.shad_decrypt(k.sk, k.hsk, view.x, *view.shad_ct);
      }
      if (!m.is_ok()) continue;
      if (m.value() == mu1_ && m.value() != mu0_) return true;
      if (m.value() == mu0_) return false;
    }
    return rng.bit();
  }

  void register_satisfying_honest(OracleHandle& oracle, Rng& rng) {
    oracle.register_honest(rabe::random_policy_satisfied_by(x_, kPolicyDepth, rng));
  }
  void register_rejecting_own(OracleHandle& oracle, Rng& rng) {
    auto own = oracle.keygen(rabe::random_policy_rejecting(x_, kPolicyDepth, rng), rng);
    oracle.register_corrupted(own.pk, own.policy);
  }

  SetupInfo info_;
  BitString x_;
  BitString mu0_;
  BitString mu1_;
  BitString payload_;
  std::vector<qstate::QReg> retained_;
};

class HonestDeleter final : public Scripted {
 public:
  std::string_view name() const override { return "honest-deleter"; }
  void query_phase(OracleHandle& oracle, Rng& rng) override {
    register_satisfying_honest(oracle, rng);
    register_rejecting_own(oracle, rng);
  }
};

/// Measures every ciphertext wire in the computational basis and submits the
/// outcomes. For PubVCED that is the honest deletion; PubVCD has no register
/// and deletes honestly.
class ComputationalMeasurer final : public Scripted {
 public:
  std::string_view name() const override { return "computational-measurer"; }
  void query_phase(OracleHandle& oracle, Rng& rng) override { register_satisfying_honest(oracle, rng); }

  DeletionCert deletion_phase(OracleHandle& oracle, ChallengeView& view, Rng& rng) override {
    auto scheme = view.ct->scheme;
    if (scheme != SchemeTag::kPriVCD && scheme != SchemeTag::kPriVCED)
      return Scripted::deletion_phase(oracle, view, rng);
    DeletionCert cert;
    for (auto& reg : view.ct->quantum) {
      auto m = qstate::measure_computational(reg, rng);
      reg = std::move(m.post_state);
      cert.payload.append(m.outcome);
    }
    remember(cert, view);
    return cert;
  }
};

/// Submits a uniformly random certificate of the right shape.
class CertForger final : public Scripted {
 public:
  std::string_view name() const override { return "cert-forger"; }

  DeletionCert deletion_phase(OracleHandle&, ChallengeView& view, Rng& rng) override {
    const auto& ct = *view.ct;
    DeletionCert cert;
    switch (ct.scheme) {
      case SchemeTag::kPriVCD:
      case SchemeTag::kPriVCED: {
        std::size_t n = 0;
        for (const auto& q : ct.quantum) n += q.n_wires();
        cert.payload = rng.bits(n);
        break;
      }
      case SchemeTag::kPubVCD:
        cert.payload = rng.bits(8 * oss::kSignatureBytes);
        break;
      case SchemeTag::kPubVCED:
        cert.payload = rng.bits(ct.quantum.size() * ct.lambda);
        cert.signature = rng.bits(ct.quantum.size() * sig::signature_width(ct.lambda));
        break;
    }
    remember(cert, view);
    return cert;
  }

  bool guess(OracleHandle&, const ChallengeView&, const std::vector<RevealedKey>&, Rng& rng) override {
    return rng.bit();
  }
};

/// Corrupts a key that can open the challenge so it can decrypt before
/// deleting. Inadmissible by construction.
class DecryptFirst final : public Scripted {
 public:
  std::string_view name() const override { return "decrypt-first"; }

  void query_phase(OracleHandle& oracle, Rng& rng) override {
    auto [index, pk] = oracle.register_honest(rabe::random_policy_satisfied_by(x_, kPolicyDepth, rng));
    pk_ = pk;
    sk_ = oracle.corrupt(index);
  }

  DeletionCert deletion_phase(OracleHandle& oracle, ChallengeView& view, Rng& rng) override {
    if (sk_ && pk_) early_ = oracle.decrypt(*sk_, oracle.update(*pk_), view.x, *view.ct, rng);
    return Scripted::deletion_phase(oracle, view, rng);
  }

  bool guess(OracleHandle& oracle, const ChallengeView& view, const std::vector<RevealedKey>& keys,
             Rng& rng) override {
    if (early_ && early_->is_ok()) return early_->value() == mu1_;
    return decrypting_guess(oracle, view, keys, rng);
  }

 private:
  std::optional<AnyPublicKey> pk_;
  std::optional<AnySecretKey> sk_;
  std::optional<DecryptResult<BitString>> early_;
};

/// Reads the selector hardcoded in a revealed Shad key and outputs its first bit.
class ZProber final : public Scripted {
 public:
  std::string_view name() const override { return "z-prober"; }

  void query_phase(OracleHandle& oracle, Rng& rng) override {
    register_satisfying_honest(oracle, rng);
    oracle.register_honest(rabe::random_policy(info_.params.tau, kPolicyDepth, rng));
  }

  bool guess(OracleHandle&, const ChallengeView&, const std::vector<RevealedKey>& keys, Rng& rng) override {
    for (const auto& k : keys) {
      const auto* sk = std::get_if<shad::SecretKey>(&k.sk);
      if (!sk) continue;
      const auto& z = sk->circuit().selector();
      if (!z.empty()) return z[0];
    }
    return rng.bit();
  }
};

/// Decrypts the challenge with every revealed key that should open it and
/// outputs 1 iff all of them return the challenge message.
class FunctionalConsistency final : public Scripted {
 public:
  std::string_view name() const override { return "functional-consistency"; }

  void query_phase(OracleHandle& oracle, Rng& rng) override {
    register_satisfying_honest(oracle, rng);
    register_satisfying_honest(oracle, rng);
    register_rejecting_own(oracle, rng);
  }

  bool guess(OracleHandle& oracle, const ChallengeView& view, const std::vector<RevealedKey>& keys,
             Rng& rng) override {
    std::size_t checked = 0;
    for (const auto& k : keys) {
      if (!k.policy.eval(view.x)) continue;
      DecryptResult<BitString> m = view.shad_ct ? oracle.shad_decrypt(k.sk, k.hsk, view.x, *view.shad_ct)
                                                : oracle.decrypt(k.sk, k.hsk, view.x, *view.ct, rng);
      if (!m.is_ok() || m.value() != mu0_) return false;
      ++checked;
    }
    return checked > 0;
  }
};

/// Random admissible behaviour for fuzzing the harness.
class Fuzzer final : public Scripted {
 public:
  std::string_view name() const override { return "fuzzer"; }

  void query_phase(OracleHandle& oracle, Rng& rng) override {
    policies_.push_back(rabe::random_policy(info_.params.tau, kPolicyDepth, rng));
    oracle.register_honest(policies_.back());
    std::size_t ops = rng.below(4);
    for (std::size_t k = 0; k < ops; ++k) {
      switch (rng.below(3)) {
        case 0:
          policies_.push_back(rabe::random_policy(info_.params.tau, kPolicyDepth, rng));
          oracle.register_honest(policies_.back());
          break;
        case 1:
          register_rejecting_own(oracle, rng);
          break;
        default: {
          std::vector<std::size_t> safe;
          for (std::size_t i = 0; i < policies_.size(); ++i)
            if (!policies_[i].eval(x_)) safe.push_back(i + 1);
          if (!safe.empty()) oracle.corrupt(safe[rng.below(safe.size())]);
          break;
        }
      }
    }
  }

  DeletionCert deletion_phase(OracleHandle& oracle, ChallengeView& view, Rng& rng) override {
    switch (rng.below(3)) {
      case 0:
        return Scripted::deletion_phase(oracle, view, rng);
      case 1:
        return measurer_.deletion_phase(oracle, view, rng);
      default:
        return forger_.deletion_phase(oracle, view, rng);
    }
  }

  bool guess(OracleHandle&, const ChallengeView&, const std::vector<RevealedKey>&, Rng& rng) override {
    return rng.bit();
  }

 private:
  std::vector<rabe::Policy> policies_;
  ComputationalMeasurer measurer_;
  CertForger forger_;
};

// CEL strategies

class CelHonestMeasurer final : public CelAdversary {
 public:
  std::string_view name() const override { return "honest-measurer"; }
  CelResponse respond(CelInput& in, Rng& rng) override {
    auto m = qstate::measure_computational(in.state, rng);
    in.state = m.post_state;
    CelResponse r;
    r.x_prime = m.outcome.slice(0, in.lambda);
    if (m.outcome.size() > in.lambda) r.signature = m.outcome.slice(in.lambda, m.outcome.size() - in.lambda);
    r.residual.label = "x':" + r.x_prime.to_string();
    r.residual.classical = {{"x_prime", r.x_prime.to_string()}};
    r.residual.retained.push_back(std::move(m.post_state));
    return r;
  }
};

class CelHadamardMeasurer final : public CelAdversary {
 public:
  std::string_view name() const override { return "hadamard-measurer"; }
  CelResponse respond(CelInput& in, Rng& rng) override {
    auto m = qstate::measure_in_basis(in.state, BasisString::hadamard(in.lambda), rng);
    CelResponse r;
    r.x_prime = m.outcome;
    auto rest = m.post_state;
    if (rest.n_wires() > in.lambda) {
      std::vector<std::size_t> wires(rest.n_wires() - in.lambda);
      for (std::size_t i = 0; i < wires.size(); ++i) wires[i] = in.lambda + i;
      auto s = qstate::measure_wires(rest, wires, BasisString::computational(wires.size()), rng);
      r.signature = s.outcome;
      rest = std::move(s.post_state);
    }
    in.state = rest;
    r.residual.label = "x':" + r.x_prime.to_string();
    r.residual.classical = {{"x_prime", r.x_prime.to_string()}};
    r.residual.retained.push_back(std::move(rest));
    return r;
  }
};

}  // namespace

std::vector<std::string> adversary_names() {
  return {"honest-deleter", "computational-measurer", "cert-forger", "decrypt-first",
          "z-prober",       "functional-consistency", "fuzzer"};
}

std::unique_ptr<Adversary> make_adversary(std::string_view name) {
  if (name == "honest-deleter") return std::make_unique<HonestDeleter>();
  if (name == "computational-measurer") return std::make_unique<ComputationalMeasurer>();
  if (name == "cert-forger") return std::make_unique<CertForger>();
  if (name == "decrypt-first") return std::make_unique<DecryptFirst>();
  if (name == "z-prober") return std::make_unique<ZProber>();
  if (name == "functional-consistency") return std::make_unique<FunctionalConsistency>();
  if (name == "fuzzer") return std::make_unique<Fuzzer>();
  throw Error(Errc::kParameterError, "unknown adversary '" + std::string(name) + "'");
}

std::unique_ptr<CelAdversary> make_cel_adversary(std::string_view name) {
  if (name == "honest-measurer" || name == "honest-deleter") return std::make_unique<CelHonestMeasurer>();
  if (name == "hadamard-measurer") return std::make_unique<CelHadamardMeasurer>();
  throw Error(Errc::kParameterError, "unknown CEL adversary '" + std::string(name) + "'");
}

// Correctness strategies

namespace {

class HonestMix final : public CorrectnessAdversary {
 public:
  explicit HonestMix(std::size_t queries) : queries_(queries) {}
  std::string_view name() const override { return "honest-mix"; }

  void play(CorrectnessOracle& oracle, Rng& rng) override {
    const auto& params = oracle.info().params;
    bool decrypting = oracle.info().experiment == Experiment::kDecryptionGame;
    BitString anchor = rng.bits(params.tau);
    auto policy = rabe::random_policy_satisfied_by(anchor, kPolicyDepth, rng);
    oracle.register_target(policy);
    std::size_t used = 1;
    std::vector<std::size_t> pending;  // not yet deleted

    auto satisfying = [&] {
      for (int tries = 0; tries < 16; ++tries) {
        auto x = rng.bits(params.tau);
        if (policy.eval(x)) return x;
      }
      return anchor;
    };
    auto do_encrypt = [&] {
      std::size_t lo = *oracle.target_index();
      std::size_t index = lo + rng.below(oracle.registrations() - lo + 1);
      if (auto j = oracle.encrypt(index, rng.bits(params.message_bits), satisfying())) pending.push_back(*j);
    };

    while (used < queries_) {
      auto roll = rng.below(10);
      if (roll < 2) {
        auto key = oracle.keygen(rabe::random_policy(params.tau, kPolicyDepth, rng), rng);
        oracle.register_non_target(key.pk, key.policy);
      } else if (roll < 6 || oracle.ciphertexts() == 0 || (!decrypting && pending.empty())) {
        do_encrypt();
      } else if (decrypting) {
        oracle.decrypt(1 + rng.below(oracle.ciphertexts()));
      } else {
        std::size_t k = rng.below(pending.size());
        oracle.verify(pending[k]);
        pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(k));
      }
      ++used;
    }
  }

 private:
  std::size_t queries_;
};

class EpochGap final : public CorrectnessAdversary {
 public:
  EpochGap(std::size_t gaps, std::size_t gap_size) : gaps_(gaps), gap_size_(gap_size) {}
  std::string_view name() const override { return "epoch-gap"; }

  void play(CorrectnessOracle& oracle, Rng& rng) override {
    const auto& params = oracle.info().params;
    bool decrypting = oracle.info().experiment == Experiment::kDecryptionGame;
    BitString x = rng.bits(params.tau);
    oracle.register_target(rabe::random_policy_satisfied_by(x, kPolicyDepth, rng));
    auto round = [&] {
      auto j = oracle.encrypt(oracle.registrations(), rng.bits(params.message_bits), x);
      if (!j) return;
      if (decrypting) {
        oracle.decrypt(*j);
        oracle.decrypt(*j);
      } else {
        oracle.verify(*j);
      }
    };
    round();
    for (std::size_t g = 0; g < gaps_; ++g) {
      for (std::size_t k = 0; k < gap_size_; ++k) {
        auto key = oracle.keygen(rabe::random_policy(params.tau, kPolicyDepth, rng), rng);
        oracle.register_non_target(key.pk, key.policy);
      }
      round();
    }
  }

 private:
  std::size_t gaps_;
  std::size_t gap_size_;
};

}  // namespace

std::unique_ptr<CorrectnessAdversary> make_honest_mix(std::size_t queries) {
  return std::make_unique<HonestMix>(queries);
}

std::unique_ptr<CorrectnessAdversary> make_epoch_gap(std::size_t gaps, std::size_t gap_size) {
  return std::make_unique<EpochGap>(gaps, gap_size);
}

}  // namespace rcd::games
