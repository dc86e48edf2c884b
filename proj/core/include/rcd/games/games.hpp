// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rcd/bits.hpp"
#include "rcd/primitives/cert.hpp"
#include "rcd/protocols/protocols.hpp"
#include "rcd/protocols/system.hpp"
#include "rcd/qstate.hpp"
#include "rcd/rabe/policy.hpp"
#include "rcd/rng.hpp"
#include "rcd/shad/shad.hpp"

namespace rcd::games {

using protocols::AnyHelperKey;
using protocols::AnyPublicKey;
using protocols::AnySecretKey;
using protocols::SchemeParams;
using protocols::SchemeTag;

enum class Experiment { kDecryptionGame, kVerificationGame, kExpCd, kExpCed, kExpShad, kCel };

std::string_view to_string(Experiment e);
/// "decryption", "verification", "exp-cd", "exp-ced", "exp-shad", "cel".
Experiment experiment_from_string(std::string_view s);

/// Short public identifier: hex of the first 8 bytes of SHA-256 over the key.
std::string key_id(const AnyPublicKey& pk);

/// Per-trial seed; trial i of a run never shares a stream with trial j.
std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index);

// Transcripts

/// JSON-lines log of one experiment. Every line is a compact JSON object with
/// sorted keys, so equal seeds give byte-identical text.
class GameTranscript {
 public:
  void append(nlohmann::json event);
  const std::vector<nlohmann::json>& events() const noexcept { return events_; }
  std::string to_jsonl() const;
  static GameTranscript from_jsonl(std::string_view text);

 private:
  std::vector<nlohmann::json> events_;
};

// Admissibility

/// D: key id -> registered policies. C: corrupted key ids.
using PolicyDictionary = std::map<std::string, std::vector<rabe::Policy>>;

struct AdmissibilityResult {
  bool ok = true;
  std::string key;     // offending key id
  std::string policy;  // offending policy, text form
};

/// ok iff P(X*) = 0 for every policy registered to a corrupted key.
AdmissibilityResult admissibility_check(const PolicyDictionary& d, const std::vector<std::string>& c,
                                        const BitString& x_star);

// Adversary interface

struct SetupInfo {
  Experiment experiment = Experiment::kExpCd;
  SchemeTag scheme = SchemeTag::kPriVCD;
  SchemeParams params;
  Bytes crs;
};

/// The adversary's only route to the challenger. Stateful queries are open
/// during the query phase; public algorithms stay available throughout.
class OracleHandle {
 public:
  virtual ~OracleHandle() = default;

  virtual const SetupInfo& info() const = 0;
  /// Public KeyGen on the current directory, for keys the adversary owns.
  virtual protocols::UserKey keygen(const rabe::Policy& policy, Rng& rng) const = 0;
  virtual void register_corrupted(const AnyPublicKey& pk, const rabe::Policy& policy) = 0;
  /// Returns the 1-based honest index and the new public key.
  virtual std::pair<std::size_t, AnyPublicKey> register_honest(const rabe::Policy& policy) = 0;
  virtual AnySecretKey corrupt(std::size_t index) = 0;
  /// Public Update on the current directory.
  virtual AnyHelperKey update(const AnyPublicKey& pk) const = 0;
  /// Public Decrypt for scheme ciphertexts.
  virtual DecryptResult<BitString> decrypt(const AnySecretKey& sk, const AnyHelperKey& hsk, const BitString& x,
                                           protocols::HybridCiphertext& ct, Rng& rng) const = 0;
  /// Public Decrypt for Shad ciphertexts.
  virtual DecryptResult<BitString> shad_decrypt(const AnySecretKey& sk, const AnyHelperKey& hsk, const BitString& x,
                                                const shad::Ciphertext& ct) const = 0;
};

struct ChallengeChoice {
  BitString mu0;  // Exp-Shad uses mu0 as its single message
  BitString mu1;
  BitString x;
};

/// What the challenger hands over in the challenge phase.
struct ChallengeView {
  BitString x;
  protocols::HybridCiphertext* ct = nullptr;         // Exp-CD, Exp-CED
  const protocols::VerificationKey* vk = nullptr;    // public variants only
  const shad::Ciphertext* shad_ct = nullptr;         // Exp-Shad
};

struct RevealedKey {
  std::size_t index = 0;
  AnyPublicKey pk;
  rabe::Policy policy;
  AnySecretKey sk;
  AnyHelperKey hsk;
};

/// Residual classical view plus any registers the adversary kept. `label`
/// is what the trace-distance estimators compare.
struct ResidualView {
  std::string label;
  nlohmann::json classical;
  std::vector<qstate::QReg> retained;
};

/// A QPT adversary, modelled as a strategy object. Deterministic given the
/// Rng the challenger passes in.
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::string_view name() const = 0;

  virtual void on_setup(const SetupInfo& info, Rng& rng);
  virtual void query_phase(OracleHandle& oracle, Rng& rng);
  virtual ChallengeChoice challenge_choice(OracleHandle& oracle, Rng& rng) = 0;
  /// Exp-CD and Exp-CED. The default raises AdversaryProtocolViolation.
  virtual DeletionCert deletion_phase(OracleHandle& oracle, ChallengeView& view, Rng& rng);
  /// Exp-CD (after a valid certificate) and Exp-Shad.
  virtual bool guess(OracleHandle& oracle, const ChallengeView& view, const std::vector<RevealedKey>& keys,
                     Rng& rng);
  /// Exp-CED output phase.
  virtual ResidualView residual() const;
};

/// honest-deleter, computational-measurer, cert-forger, decrypt-first,
/// z-prober, functional-consistency, fuzzer. ParameterError otherwise.
std::unique_ptr<Adversary> make_adversary(std::string_view name);
std::vector<std::string> adversary_names();

// Experiment results

struct ExperimentResult {
  enum class Output { kBit, kBottom, kResidual };

  int b = 0;
  Output output = Output::kBottom;
  bool bit = false;
  std::optional<ResidualView> residual;
  std::size_t trials = 1;
  /// Hadamard positions of the challenge (PriVCD, PriVCED); the challenger's
  /// own record, never shown to the adversary.
  std::optional<std::size_t> hadamard_count;
  GameTranscript transcript;

  bool is_bottom() const noexcept { return output == Output::kBottom; }
  /// Label used for distributions: "bottom", "bit:0", "bit:1" or the residual label.
  std::string label() const;
};

struct GameConfig {
  SchemeParams params;
  /// Experiments on single-bit challenges (Exp-CED) override message_bits.
  std::uint64_t seed = 0;
};

/// Certificate-based security experiment for PriVCD and PubVCD. Honest keys
/// are revealed only after the certificate verifies.
ExperimentResult run_exp_cd(SchemeTag scheme, int b, Adversary& adversary, const GameConfig& config);
/// Everlasting experiment for PriVCED and PubVCED: single-bit challenge, no
/// key reveal, output is the residual view with the RABE component replaced by
/// an opaque handle.
ExperimentResult run_exp_ced(SchemeTag scheme, int b, Adversary& adversary, const GameConfig& config);
/// Real (b = 0) versus simulated (b = 1) Shad experiment. `params.message_bits`
/// is the Shad message width.
ExperimentResult run_exp_shad(int b, Adversary& adversary, const GameConfig& config);

// Correctness games

/// Challenger side of the decryption and verification games.
class CorrectnessOracle {
 public:
  virtual ~CorrectnessOracle() = default;

  virtual const SetupInfo& info() const = 0;
  virtual protocols::UserKey keygen(const rabe::Policy& policy, Rng& rng) const = 0;
  /// Returns the registration counter after the query.
  virtual std::size_t register_non_target(const AnyPublicKey& pk, const rabe::Policy& policy) = 0;
  /// nullopt when a target key already exists.
  virtual std::optional<std::size_t> register_target(const rabe::Policy& policy) = 0;
  /// Encrypts under mpk_index. nullopt without a target or when P*(X) = 0.
  virtual std::optional<std::size_t> encrypt(std::size_t index, const BitString& mu, const BitString& x) = 0;
  /// Decryption game only.
  virtual void decrypt(std::size_t j) = 0;
  /// Verification game only.
  virtual void verify(std::size_t j) = 0;

  virtual std::size_t registrations() const = 0;
  virtual std::optional<std::size_t> target_index() const = 0;
  virtual const std::optional<rabe::Policy>& target_policy() const = 0;
  virtual std::size_t ciphertexts() const = 0;
};

class CorrectnessAdversary {
 public:
  virtual ~CorrectnessAdversary() = default;
  virtual std::string_view name() const = 0;
  virtual void play(CorrectnessOracle& oracle, Rng& rng) = 0;
};

/// Random mix of registrations, encryptions and decryption or verification
/// queries; `queries` counts every oracle call.
std::unique_ptr<CorrectnessAdversary> make_honest_mix(std::size_t queries);
/// Target first, then `gaps` rounds of (register `gap_size` keys, encrypt
/// under the newest mpk, decrypt twice).
std::unique_ptr<CorrectnessAdversary> make_epoch_gap(std::size_t gaps, std::size_t gap_size);

/// Test hooks applied by the challenger.
struct GameHooks {
  std::function<void(std::size_t j, protocols::HybridCiphertext&)> after_encrypt;
  std::function<void(std::size_t j, DeletionCert&)> after_delete;
};

struct GameVerdict {
  int b = 1;
  std::size_t queries = 0;
  std::size_t decryptions = 0;
  std::size_t verifications = 0;
  std::size_t updates = 0;
  std::size_t get_updates = 0;
  GameTranscript transcript;
};

GameVerdict run_decryption_game(SchemeTag scheme, CorrectnessAdversary& adversary, const GameConfig& config,
                                const GameHooks& hooks = {});
GameVerdict run_verification_game(SchemeTag scheme, CorrectnessAdversary& adversary, const GameConfig& config,
                                  const GameHooks& hooks = {});

// Certified everlasting lemma experiments

enum class CelVariant { kPrivate, kPublic };

/// What the adversary receives from Z: the register and a handle standing in
/// for (theta, beta) and, in the public variant, the signing material.
struct CelInput {
  std::size_t lambda = 0;
  qstate::QReg state;  // |x>_theta, then the signature wires in the public variant
  Bytes vk;            // public variant
};

struct CelResponse {
  BitString x_prime;
  std::optional<BitString> signature;
  ResidualView residual;
};

class CelAdversary {
 public:
  virtual ~CelAdversary() = default;
  virtual std::string_view name() const = 0;
  virtual CelResponse respond(CelInput& input, Rng& rng) = 0;
};

/// honest-measurer (computational basis) and hadamard-measurer.
std::unique_ptr<CelAdversary> make_cel_adversary(std::string_view name);

struct CelConfig {
  std::size_t lambda = 6;
  std::uint64_t seed = 0;
  /// Overrides the sampled basis string (degenerate cases in tests).
  std::optional<BasisString> theta;
};

/// Lemma convention: beta = b xor (xor of x_i over theta_i = 1); the private
/// variant accepts iff x'_i = x_i wherever theta_i = 0, the public variant iff
/// the signature on x' verifies.
ExperimentResult run_cel_experiment(CelVariant variant, int b, CelAdversary& adversary, const CelConfig& config);

// Statistics

struct AdvantageEstimate {
  double advantage = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double p0 = 0.0;  // Pr[output 1 | b = 0]
  double p1 = 0.0;
  std::size_t n0 = 0;
  std::size_t n1 = 0;
};

/// Wilson score interval for k successes in n trials at z standard deviations.
std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z = 1.96);
/// |Pr[1 | b=1] - Pr[1 | b=0]| with a Newcombe interval built from two Wilson
/// intervals. Bottom and residual outputs count as "not 1".
AdvantageEstimate estimate_advantage(const std::vector<ExperimentResult>& results0,
                                     const std::vector<ExperimentResult>& results1, double z = 1.96);
AdvantageEstimate estimate_advantage(const std::vector<int>& outputs0, const std::vector<int>& outputs1,
                                     double z = 1.96);

/// Empirical distribution over result labels.
qstate::Distribution empirical_distribution(const std::vector<ExperimentResult>& results);

struct TdAgreement {
  double exact = 0.0;
  double empirical = 0.0;
  /// Largest |(p0^ - p1^) - (p0 - p1)| / sigma over outcomes with sigma > 0.
  double max_z = 0.0;
  bool agree = false;
};

/// Checks an exact pair of distributions against sampled ones outcome by
/// outcome, at `z_limit` binomial standard deviations.
TdAgreement td_agreement(const qstate::Distribution& exact0, const qstate::Distribution& exact1,
                         const std::vector<ExperimentResult>& samples0, const std::vector<ExperimentResult>& samples1,
                         double z_limit = 4.0);

// Exact residual distributions

/// How the classical ciphertext component shows up in the residual view.
/// kOpaque is the idealized-hiding handle; kOpened hands over its plaintext
/// (theta and the masked bit), as an unbounded post-deletion adversary would
/// see it.
enum class HandleMode { kOpaque, kOpened };

/// Branch enumeration over x, theta in {0,1}^lambda for the honest deleter in
/// Exp-CED (lambda <= 8). Labels match run_exp_ced with HandleMode::kOpaque.
qstate::Distribution exact_ced_residual(SchemeTag scheme, int b, std::size_t lambda,
                                        HandleMode mode = HandleMode::kOpaque);
/// Same for the CEL experiment with the honest measurer.
qstate::Distribution exact_cel_residual(CelVariant variant, int b, std::size_t lambda,
                                        HandleMode mode = HandleMode::kOpaque);

// Trial runner

/// Runs fn(i) for i in [0, n) on up to `jobs` threads; results keep index order.
std::vector<ExperimentResult> run_trials(std::size_t n, std::size_t jobs,
                                         const std::function<ExperimentResult(std::size_t)>& fn);

}  // namespace rcd::games
