// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "rcd/error.hpp"
#include "rcd/games/games.hpp"
#include "rcd/hash.hpp"
#include "rcd/primitives/sig.hpp"

namespace rcd::games {
namespace {

using nlohmann::json;
using protocols::System;

constexpr char kOpaqueHandle[] = "handle:opaque";

std::string short_digest(BytesView data) { return to_hex(digest_bytes(sha256(data), 8)); }

Error violation(const std::string& what) { return Error(Errc::kAdversaryProtocolViolation, what); }

/// C, H and D as the experiments define them, in registration order.
class Registry {
 public:
  void add_corrupted(const std::string& id, const rabe::Policy& p) {
    if (std::find(c_.begin(), c_.end(), id) == c_.end()) c_.push_back(id);
    d_[id].push_back(p);
  }
  void add_honest(const std::string& id, const rabe::Policy& p) {
    h_.push_back(id);
    d_[id].push_back(p);
  }
  void corrupt(const std::string& id) {
    h_.erase(std::remove(h_.begin(), h_.end(), id), h_.end());
    if (std::find(c_.begin(), c_.end(), id) == c_.end()) c_.push_back(id);
  }
  bool is_honest(const std::string& id) const { return std::find(h_.begin(), h_.end(), id) != h_.end(); }

  const std::vector<std::string>& corrupted() const noexcept { return c_; }
  const PolicyDictionary& dictionary() const noexcept { return d_; }

  json sets() const { return {{"C", c_}, {"H", h_}}; }
  json dictionary_json() const {
    json out = json::object();
    for (const auto& [id, ps] : d_) {
      json list = json::array();
      for (const auto& p : ps) list.push_back(p.to_string());
      out[id] = list;
    }
    return out;
  }

 private:
  std::vector<std::string> c_;
  std::vector<std::string> h_;
  PolicyDictionary d_;
};

struct HonestKey {
  AnyPublicKey pk;
  std::optional<AnySecretKey> sk;  // empty in the simulated Shad world
  rabe::Policy policy;
  std::string id;
};

json event(const char* name) { return json{{"event", name}}; }

json setup_event(const SetupInfo& info, std::uint64_t seed, int b, std::string_view adversary) {
  json e = event("setup");
  e["experiment"] = std::string(to_string(info.experiment));
  e["scheme"] = std::string(protocols::to_string(info.scheme));
  e["seed"] = seed;
  e["b"] = b;
  e["adversary"] = std::string(adversary);
  e["params"] = info.params.to_json();
  e["crs"] = short_digest(info.crs);
  return e;
}

/// Shared phase bookkeeping for the oracle implementations.
class OracleBase : public OracleHandle {
 public:
  OracleBase(SetupInfo info, Rng& rng, GameTranscript& t) : info_(std::move(info)), rng_(rng), t_(t) {}

  const SetupInfo& info() const override { return info_; }
  void close() { open_ = false; }
  const Registry& registry() const noexcept { return reg_; }
  const std::vector<HonestKey>& honest() const noexcept { return honest_; }

 protected:
  void require_open(const char* query) const {
    if (!open_) throw violation(std::string(query) + " after the query phase");
  }
  HonestKey& honest_at(std::size_t index) {
    if (index == 0 || index > honest_.size())
      throw violation("corrupt index " + std::to_string(index) + " outside [1, " + std::to_string(honest_.size()) +
                      "]");
    return honest_[index - 1];
  }
  void log(json e) {
    e.update(reg_.sets());
    t_.append(std::move(e));
  }

  SetupInfo info_;
  Rng& rng_;
  GameTranscript& t_;
  Registry reg_;
  std::vector<HonestKey> honest_;
  bool open_ = true;
};

/// Oracle over a scheme instance (Exp-CD, Exp-CED).
class SystemOracle final : public OracleBase {
 public:
  SystemOracle(System& sys, SetupInfo info, Rng& rng, GameTranscript& t)
      : OracleBase(std::move(info), rng, t), sys_(sys) {}

  protocols::UserKey keygen(const rabe::Policy& policy, Rng& rng) const override { return sys_.keygen(policy, rng); }

  void register_corrupted(const AnyPublicKey& pk, const rabe::Policy& policy) override {
    require_open("register-corrupted");
    if (pk.index() != (protocols::uses_shad(sys_.scheme()) ? 0U : 1U))
      throw violation("public key belongs to the other backend");
    sys_.register_key(pk, policy);
    auto id = key_id(pk);
    reg_.add_corrupted(id, policy);
    json e = event("register-corrupted");
    e["key"] = id;
    e["policy"] = policy.to_string();
    e["epoch"] = sys_.epoch();
    log(std::move(e));
  }

  std::pair<std::size_t, AnyPublicKey> register_honest(const rabe::Policy& policy) override {
    require_open("register-honest");
    auto key = sys_.keygen(policy, rng_);
    sys_.register_key(key.pk, policy);
    auto id = key_id(key.pk);
    honest_.push_back({key.pk, key.sk, policy, id});
    reg_.add_honest(id, policy);
    json e = event("register-honest");
    e["index"] = honest_.size();
    e["key"] = id;
    e["policy"] = policy.to_string();
    e["epoch"] = sys_.epoch();
    log(std::move(e));
    return {honest_.size(), key.pk};
  }

  AnySecretKey corrupt(std::size_t index) override {
    require_open("corrupt");
    auto& h = honest_at(index);
    reg_.corrupt(h.id);
    json e = event("corrupt");
    e["index"] = index;
    e["key"] = h.id;
    log(std::move(e));
    return *h.sk;
  }

  AnyHelperKey update(const AnyPublicKey& pk) const override { return sys_.update(pk); }

  DecryptResult<BitString> decrypt(const AnySecretKey& sk, const AnyHelperKey& hsk, const BitString& x,
                                   protocols::HybridCiphertext& ct, Rng& rng) const override {
    return sys_.decrypt(sk, hsk, x, ct, rng);
  }

  DecryptResult<BitString> shad_decrypt(const AnySecretKey&, const AnyHelperKey&, const BitString&,
                                        const shad::Ciphertext&) const override {
    throw Error(Errc::kParameterError, "no Shad ciphertexts in this experiment");
  }

 private:
  System& sys_;
};

/// Oracle for the Shad experiment; b selects real or simulated algorithms.
class ShadOracle final : public OracleBase {
 public:
  ShadOracle(std::shared_ptr<const shad::Crs> crs, int b, SetupInfo info, Rng& rng, GameTranscript& t)
      : OracleBase(std::move(info), rng, t), crs_(std::move(crs)), b_(b), aux_(shad::empty_aux(*crs_)) {}

  protocols::UserKey keygen(const rabe::Policy& policy, Rng& rng) const override {
    auto [pk, sk] = shad::keygen(*crs_, &aux_, policy, rng);
    return {std::move(pk), std::move(sk), policy};
  }

  void register_corrupted(const AnyPublicKey& pk, const rabe::Policy& policy) override {
    require_open("register-corrupted");
    const auto* spk = std::get_if<shad::PublicKey>(&pk);
    if (!spk) throw violation("public key belongs to the other backend");
    if (b_ == 0)
      aux_ = shad::regpk(*crs_, aux_, *spk, policy).second;
    else
      aux_ = shad::sim_regpk(*crs_, aux_, *spk, policy, dict_).second;
    auto id = key_id(pk);
    reg_.add_corrupted(id, policy);
    json e = event("register-corrupted");
    e["key"] = id;
    e["policy"] = policy.to_string();
    e["epoch"] = aux_.epoch();
    log(std::move(e));
  }

  std::pair<std::size_t, AnyPublicKey> register_honest(const rabe::Policy& policy) override {
    require_open("register-honest");
    HonestKey h{shad::PublicKey{}, std::nullopt, policy, {}};
    if (b_ == 0) {
      auto [pk, sk] = shad::keygen(*crs_, &aux_, policy, rng_);
      aux_ = shad::regpk(*crs_, aux_, pk, policy).second;
      h.pk = std::move(pk);
      h.sk = std::move(sk);
    } else {
      auto pk = shad::sim_keygen(*crs_, &aux_, policy, dict_, rng_);
      aux_ = shad::sim_regpk(*crs_, aux_, pk, policy, dict_).second;
      h.pk = std::move(pk);
    }
    h.id = key_id(h.pk);
    honest_.push_back(h);
    reg_.add_honest(h.id, policy);
    json e = event("register-honest");
    e["index"] = honest_.size();
    e["key"] = h.id;
    e["policy"] = policy.to_string();
    e["epoch"] = aux_.epoch();
    log(std::move(e));
    return {honest_.size(), h.pk};
  }

  AnySecretKey corrupt(std::size_t index) override {
    require_open("corrupt");
    auto& h = honest_at(index);
    reg_.corrupt(h.id);
    json e = event("corrupt");
    e["index"] = index;
    e["key"] = h.id;
    e["simulated"] = b_ == 1;
    log(std::move(e));
    if (b_ == 0) return *h.sk;
    return shad::sim_corrupt(*crs_, std::get<shad::PublicKey>(h.pk), dict_);
  }

  AnyHelperKey update(const AnyPublicKey& pk) const override {
    const auto* spk = std::get_if<shad::PublicKey>(&pk);
    if (!spk) throw violation("public key belongs to the other backend");
    return shad::update(*crs_, aux_, *spk);
  }

  DecryptResult<BitString> decrypt(const AnySecretKey&, const AnyHelperKey&, const BitString&,
                                   protocols::HybridCiphertext&, Rng&) const override {
    throw Error(Errc::kParameterError, "the Shad experiment has no scheme ciphertexts");
  }

  DecryptResult<BitString> shad_decrypt(const AnySecretKey& sk, const AnyHelperKey& hsk, const BitString& x,
                                        const shad::Ciphertext& ct) const override {
    const auto* ssk = std::get_if<shad::SecretKey>(&sk);
    const auto* shsk = std::get_if<shad::HelperSecretKey>(&hsk);
    if (!ssk || !shsk) throw violation("key belongs to the other backend");
    return shad::decrypt(*ssk, *shsk, x, ct);
  }

  const shad::AuxState& aux() const noexcept { return aux_; }
  const shad::SimDictionary& dict() const noexcept { return dict_; }
  shad::MasterPublicKey mpk() const { return shad::master_public_key(*crs_, aux_); }

 private:
  std::shared_ptr<const shad::Crs> crs_;
  int b_;
  shad::AuxState aux_;
  shad::SimDictionary dict_;
};

void check_bit(int b) {
  if (b != 0 && b != 1) throw Error(Errc::kParameterError, "challenge bit must be 0 or 1");
}

void check_challenge_shape(const ChallengeChoice& c, const SchemeParams& params, bool two_messages) {
  if (c.x.size() != params.tau)
    throw violation("challenge attribute has " + std::to_string(c.x.size()) + " bits, expected " +
                    std::to_string(params.tau));
  if (c.mu0.size() != params.message_bits || (two_messages && c.mu1.size() != params.message_bits))
    throw violation("challenge messages must have " + std::to_string(params.message_bits) + " bits");
}

void enforce_admissibility(const Registry& reg, const BitString& x, json& challenge, GameTranscript& t) {
  auto adm = admissibility_check(reg.dictionary(), reg.corrupted(), x);
  challenge["admissible"] = adm.ok;
  challenge["D"] = reg.dictionary_json();
  challenge.update(reg.sets());
  if (!adm.ok) challenge["violation"] = {{"key", adm.key}, {"policy", adm.policy}};
  t.append(challenge);
  if (!adm.ok)
    throw Error(Errc::kAdmissibilityError,
                "corrupted key " + adm.key + " has policy '" + adm.policy + "' satisfied by " + x.to_string());
}

std::optional<std::size_t> hadamard_count(const protocols::VerificationKey& vk) {
  std::size_t h = 0;
  if (vk.scheme == SchemeTag::kPriVCD && vk.ske_key) {
    for (const auto& blk : vk.ske_key->blocks()) h += blk.theta.hadamard_count();
    return h;
  }
  if (vk.scheme == SchemeTag::kPriVCED) {
    for (const auto& blk : vk.blocks) h += blk.theta.hadamard_count();
    return h;
  }
  return std::nullopt;
}

std::size_t quantum_wires(const protocols::HybridCiphertext& ct) {
  std::size_t n = 0;
  for (const auto& q : ct.quantum) n += q.n_wires();
  return n;
}

json cert_event(const DeletionCert& cert, bool valid) {
  json e = event("certificate");
  e["payload_bits"] = cert.payload.size();
  e["signature_bits"] = cert.signature ? cert.signature->size() : 0;
  e["cert"] = short_digest(as_bytes(cert.to_json().dump()));
  e["valid"] = valid;
  return e;
}

ExperimentResult finish(ExperimentResult r, GameTranscript t) {
  json e = event("verdict");
  e["b"] = r.b;
  switch (r.output) {
    case ExperimentResult::Output::kBottom:
      e["output"] = "bottom";
      break;
    case ExperimentResult::Output::kBit:
      e["output"] = "bit";
      e["bit"] = r.bit ? 1 : 0;
      break;
    case ExperimentResult::Output::kResidual:
      e["output"] = "residual";
      e["label"] = r.label();
      break;
  }
  t.append(std::move(e));
  r.transcript = std::move(t);
  return r;
}

ExperimentResult run_deletion_experiment(Experiment kind, SchemeTag scheme, int b, Adversary& adversary,
                                         const GameConfig& config) {
  check_bit(b);
  bool everlasting = kind == Experiment::kExpCed;
  if (protocols::is_everlasting(scheme) != everlasting)
    throw Error(Errc::kParameterError, std::string(protocols::to_string(scheme)) + " does not belong to " +
                                           std::string(to_string(kind)));
  SchemeParams params = config.params;
  if (everlasting) params.message_bits = 1;

  Rng root(config.seed);
  Rng ch_rng = root.fork();
  Rng adv_rng = root.fork();
  GameTranscript t;

  auto sys = System::setup(scheme, params, ch_rng);
  SetupInfo info{kind, scheme, params,
                 protocols::uses_shad(scheme) ? sys.shad_crs().serialize() : sys.rabe_crs().serialize()};
  json setup = setup_event(info, config.seed, b, adversary.name());
  if (everlasting) setup["handle"] = "idealized-hiding";
  t.append(std::move(setup));

  SystemOracle oracle(sys, info, ch_rng, t);
  adversary.on_setup(info, adv_rng);
  adversary.query_phase(oracle, adv_rng);
  oracle.close();

  auto choice = adversary.challenge_choice(oracle, adv_rng);
  if (everlasting) {
    if (choice.x.size() != params.tau)
      throw violation("challenge attribute has " + std::to_string(choice.x.size()) + " bits, expected " +
                      std::to_string(params.tau));
  } else {
    check_challenge_shape(choice, params, true);
  }
  json challenge = event("challenge");
  challenge["x"] = choice.x.to_string();
  if (!everlasting) {
    challenge["mu0"] = choice.mu0.to_string();
    challenge["mu1"] = choice.mu1.to_string();
  }
  enforce_admissibility(oracle.registry(), choice.x, challenge, t);

  BitString message = everlasting ? BitString(1, b == 1) : (b == 1 ? choice.mu1 : choice.mu0);
  auto enc = sys.encrypt(choice.x, message, ch_rng);
  bool hand_vk = enc.vk.publishable();
  json enc_event = event("encrypt");
  enc_event["epoch"] = sys.epoch();
  enc_event["ct"] = short_digest(enc.ct.classical());
  enc_event["quantum_wires"] = quantum_wires(enc.ct);
  enc_event["vk_to_adversary"] = hand_vk;
  t.append(std::move(enc_event));

  ExperimentResult r;
  r.b = b;
  r.hadamard_count = hadamard_count(enc.vk);

  protocols::HybridCiphertext held = enc.ct;
  ChallengeView view{choice.x, &held, hand_vk ? &enc.vk : nullptr, nullptr};
  auto cert = adversary.deletion_phase(oracle, view, adv_rng);
  bool valid = System::verify(enc.vk, cert);
  t.append(cert_event(cert, valid));
  if (!valid) {
    r.output = ExperimentResult::Output::kBottom;
    return finish(std::move(r), std::move(t));
  }

  if (everlasting) {
    auto residual = adversary.residual();
    residual.label = std::string(kOpaqueHandle) + "|" + residual.label;
    r.output = ExperimentResult::Output::kResidual;
    r.residual = std::move(residual);
    return finish(std::move(r), std::move(t));
  }

  std::vector<RevealedKey> keys;
  json ids = json::array();
  for (std::size_t i = 0; i < oracle.honest().size(); ++i) {
    const auto& h = oracle.honest()[i];
    if (!oracle.registry().is_honest(h.id)) continue;
    keys.push_back({i + 1, h.pk, h.policy, *h.sk, sys.update(h.pk)});
    ids.push_back(h.id);
  }
  json reveal = event("reveal");
  reveal["keys"] = ids;
  t.append(std::move(reveal));

  r.output = ExperimentResult::Output::kBit;
  r.bit = adversary.guess(oracle, view, keys, adv_rng);
  return finish(std::move(r), std::move(t));
}

}  // namespace

ExperimentResult run_exp_cd(SchemeTag scheme, int b, Adversary& adversary, const GameConfig& config) {
  return run_deletion_experiment(Experiment::kExpCd, scheme, b, adversary, config);
}

ExperimentResult run_exp_ced(SchemeTag scheme, int b, Adversary& adversary, const GameConfig& config) {
  return run_deletion_experiment(Experiment::kExpCed, scheme, b, adversary, config);
}

ExperimentResult run_exp_shad(int b, Adversary& adversary, const GameConfig& config) {
  check_bit(b);
  const auto& params = config.params;
  params.validate();
  Rng root(config.seed);
  Rng ch_rng = root.fork();
  Rng adv_rng = root.fork();
  GameTranscript t;

  auto crs = std::make_shared<const shad::Crs>(
      shad::setup(params.lambda, params.tau, params.message_bits, ch_rng, params.max_depth));
  // The Shad experiment has no scheme tag of its own; PriVCD marks the backend.
  SetupInfo info{Experiment::kExpShad, SchemeTag::kPriVCD, params, crs->serialize()};
  json setup = setup_event(info, config.seed, b, adversary.name());
  setup.erase("scheme");
  setup["world"] = b == 0 ? "real" : "simulated";
  t.append(std::move(setup));

  ShadOracle oracle(crs, b, info, ch_rng, t);
  adversary.on_setup(info, adv_rng);
  adversary.query_phase(oracle, adv_rng);
  oracle.close();

  auto choice = adversary.challenge_choice(oracle, adv_rng);
  check_challenge_shape(choice, params, false);
  json challenge = event("challenge");
  challenge["x"] = choice.x.to_string();
  challenge["mu"] = choice.mu0.to_string();
  enforce_admissibility(oracle.registry(), choice.x, challenge, t);
  if (b == 1 && oracle.dict().empty()) throw violation("the simulated world needs at least one honest key");

  auto mpk = oracle.mpk();
  auto ct = b == 0 ? shad::encrypt(mpk, choice.x, choice.mu0, ch_rng, oracle.aux())
                   : shad::sim_ct(mpk, oracle.dict(), choice.x, ch_rng, oracle.aux());
  json enc_event = event("encrypt");
  enc_event["epoch"] = oracle.aux().epoch();
  enc_event["ct"] = short_digest(ct.serialize());
  t.append(std::move(enc_event));

  std::vector<RevealedKey> keys;
  json ids = json::array();
  for (std::size_t i = 0; i < oracle.honest().size(); ++i) {
    const auto& h = oracle.honest()[i];
    if (!oracle.registry().is_honest(h.id)) continue;
    const auto& spk = std::get<shad::PublicKey>(h.pk);
    AnySecretKey sk = b == 0 ? *h.sk : AnySecretKey(shad::reveal(*crs, spk, oracle.dict(), ct, choice.mu0));
    keys.push_back({i + 1, h.pk, h.policy, std::move(sk), shad::update(*crs, oracle.aux(), spk)});
    ids.push_back(h.id);
  }
  json reveal = event("reveal");
  reveal["keys"] = ids;
  reveal["simulated"] = b == 1;
  t.append(std::move(reveal));

  ExperimentResult r;
  r.b = b;
  ChallengeView view{choice.x, nullptr, nullptr, &ct};
  r.output = ExperimentResult::Output::kBit;
  r.bit = adversary.guess(oracle, view, keys, adv_rng);
  return finish(std::move(r), std::move(t));
}

// Correctness games

namespace {

struct Halt {
  std::string reason;
};

class CorrectnessChallenger final : public CorrectnessOracle {
 public:
  CorrectnessChallenger(System& sys, SetupInfo info, Rng& rng, GameTranscript& t, const GameHooks& hooks,
                        GameVerdict& v)
      : sys_(sys), info_(std::move(info)), rng_(rng), t_(t), hooks_(hooks), v_(v) {}

  const SetupInfo& info() const override { return info_; }
  protocols::UserKey keygen(const rabe::Policy& policy, Rng& rng) const override { return sys_.keygen(policy, rng); }

  std::size_t register_non_target(const AnyPublicKey& pk, const rabe::Policy& policy) override {
    ++v_.queries;
    if (pk.index() != (protocols::uses_shad(sys_.scheme()) ? 0U : 1U))
      throw violation("public key belongs to the other backend");
    auto epoch = sys_.register_key(pk, policy);
    json e = event("register-non-target");
    e["key"] = key_id(pk);
    e["policy"] = policy.to_string();
    e["ctr_reg"] = epoch;
    t_.append(std::move(e));
    return epoch;
  }

  std::optional<std::size_t> register_target(const rabe::Policy& policy) override {
    ++v_.queries;
    json e = event("register-target");
    e["policy"] = policy.to_string();
    if (target_) {
      e["reply"] = "bottom";
      t_.append(std::move(e));
      return std::nullopt;
    }
    auto key = sys_.keygen(policy, rng_);
    auto epoch = sys_.register_key(key.pk, policy);
    hsk_ = sys_.update(key.pk);
    target_ = std::move(key);
    target_index_ = epoch;
    target_policy_ = policy;
    e["key"] = key_id(target_->pk);
    e["ctr_reg"] = epoch;
    e["hsk_epoch"] = epoch;
    t_.append(std::move(e));
    return epoch;
  }

  std::optional<std::size_t> encrypt(std::size_t index, const BitString& mu, const BitString& x) override {
    ++v_.queries;
    json e = event("encrypt");
    e["index"] = index;
    e["mu"] = mu.to_string();
    e["x"] = x.to_string();
    if (!target_ || !target_policy_->eval(x)) {
      e["reply"] = "bottom";
      t_.append(std::move(e));
      return std::nullopt;
    }
    if (index < *target_index_ || index > sys_.epoch())
      throw violation("encryption index " + std::to_string(index) + " outside [" + std::to_string(*target_index_) +
                      ", " + std::to_string(sys_.epoch()) + "]");
    if (mu.size() != sys_.params().message_bits)
      throw violation("message has " + std::to_string(mu.size()) + " bits");
    auto enc = sys_.encrypt_at(index, x, mu, rng_);
    std::size_t j = cts_.size() + 1;
    if (hooks_.after_encrypt) hooks_.after_encrypt(j, enc.ct);
    e["ctr_enc"] = j;
    e["ct"] = short_digest(enc.ct.classical());
    t_.append(std::move(e));
    cts_.push_back({std::move(enc), mu, x, false});
    return j;
  }

  void decrypt(std::size_t j) override {
    ++v_.queries;
    if (info_.experiment != Experiment::kDecryptionGame) throw violation("decryption query in the verification game");
    auto& c = ct_at(j);
    json e = event("decrypt");
    e["ctr_enc"] = j;
    auto m = sys_.decrypt(target_->sk, *hsk_, c.x, c.enc.ct, rng_);
    e["first"] = std::string(rcd::to_string(m.status()));
    if (m.is_get_update()) {
      ++v_.get_updates;
      ++v_.updates;
      hsk_ = sys_.update(target_->pk);
      m = sys_.decrypt(target_->sk, *hsk_, c.x, c.enc.ct, rng_);
      e["updated"] = true;
      e["second"] = std::string(rcd::to_string(m.status()));
    }
    ++v_.decryptions;
    bool ok = m.is_ok() && m.value() == c.mu;
    e["match"] = ok;
    t_.append(std::move(e));
    if (!ok) throw Halt{"decryption of ciphertext " + std::to_string(j) + " differs from its message"};
  }

  void verify(std::size_t j) override {
    ++v_.queries;
    if (info_.experiment != Experiment::kVerificationGame) throw violation("verification query in the decryption game");
    auto& c = ct_at(j);
    if (c.deleted) throw violation("ciphertext " + std::to_string(j) + " was already deleted");
    c.deleted = true;
    auto cert = System::erase(c.enc.ct, rng_);
    if (hooks_.after_delete) hooks_.after_delete(j, cert);
    bool valid = System::verify(c.enc.vk, cert);
    ++v_.verifications;
    json e = event("verify");
    e["ctr_enc"] = j;
    e["valid"] = valid;
    t_.append(std::move(e));
    if (!valid) throw Halt{"certificate for ciphertext " + std::to_string(j) + " rejected"};
  }

  std::size_t registrations() const override { return sys_.epoch(); }
  std::optional<std::size_t> target_index() const override { return target_index_; }
  const std::optional<rabe::Policy>& target_policy() const override { return target_policy_; }
  std::size_t ciphertexts() const override { return cts_.size(); }

 private:
  struct Stored {
    protocols::Encrypted enc;
    BitString mu;
    BitString x;
    bool deleted = false;
  };

  Stored& ct_at(std::size_t j) {
    if (j == 0 || j > cts_.size())
      throw violation("ciphertext index " + std::to_string(j) + " outside [1, " + std::to_string(cts_.size()) + "]");
    return cts_[j - 1];
  }

  System& sys_;
  SetupInfo info_;
  Rng& rng_;
  GameTranscript& t_;
  const GameHooks& hooks_;
  GameVerdict& v_;
  std::optional<protocols::UserKey> target_;
  std::optional<AnyHelperKey> hsk_;
  std::optional<std::size_t> target_index_;
  std::optional<rabe::Policy> target_policy_;
  std::vector<Stored> cts_;
};

GameVerdict run_correctness(Experiment kind, SchemeTag scheme, CorrectnessAdversary& adversary,
                            const GameConfig& config, const GameHooks& hooks) {
  Rng root(config.seed);
  Rng ch_rng = root.fork();
  Rng adv_rng = root.fork();
  GameVerdict v;
  auto sys = System::setup(scheme, config.params, ch_rng);
  SetupInfo info{kind, scheme, config.params,
                 protocols::uses_shad(scheme) ? sys.shad_crs().serialize() : sys.rabe_crs().serialize()};
  v.transcript.append(setup_event(info, config.seed, 1, adversary.name()));

  CorrectnessChallenger challenger(sys, info, ch_rng, v.transcript, hooks, v);
  json verdict = event("verdict");
  try {
    adversary.play(challenger, adv_rng);
    v.b = 1;
  } catch (const Halt& h) {
    v.b = 0;
    verdict["reason"] = h.reason;
  }
  verdict["b"] = v.b;
  verdict["queries"] = v.queries;
  verdict["updates"] = v.updates;
  v.transcript.append(std::move(verdict));
  return v;
}

}  // namespace

GameVerdict run_decryption_game(SchemeTag scheme, CorrectnessAdversary& adversary, const GameConfig& config,
                                const GameHooks& hooks) {
  return run_correctness(Experiment::kDecryptionGame, scheme, adversary, config, hooks);
}

GameVerdict run_verification_game(SchemeTag scheme, CorrectnessAdversary& adversary, const GameConfig& config,
                                  const GameHooks& hooks) {
  return run_correctness(Experiment::kVerificationGame, scheme, adversary, config, hooks);
}

// Certified everlasting lemma

ExperimentResult run_cel_experiment(CelVariant variant, int b, CelAdversary& adversary, const CelConfig& config) {
  check_bit(b);
  std::size_t lambda = config.lambda;
  if (lambda == 0) throw Error(Errc::kParameterError, "lambda must be positive");
  if (config.theta && config.theta->size() != lambda)
    throw Error(Errc::kLengthMismatch, "theta override has the wrong length");
  Rng root(config.seed);
  Rng ch_rng = root.fork();
  Rng adv_rng = root.fork();
  GameTranscript t;

  BitString x = ch_rng.bits(lambda);
  BasisString theta = config.theta ? *config.theta : BasisString(ch_rng.bits(lambda));
  bool beta = b == 1;
  for (std::size_t i = 0; i < lambda; ++i)
    if (theta.is_hadamard(i)) beta ^= x[i];

  CelInput input;
  input.lambda = lambda;
  input.state = qstate::bb84_prepare(x, theta);
  std::optional<sig::KeyPair> keys;
  if (variant == CelVariant::kPublic) {
    keys = sig::gen(lambda, ch_rng);
    input.state = qstate::apply_xor_map(input.state, protocols::sign_map(keys->sigk));
    input.vk = keys->vk;
  }

  json setup = event("setup");
  setup["experiment"] = "cel";
  setup["variant"] = variant == CelVariant::kPrivate ? "private" : "public";
  setup["seed"] = config.seed;
  setup["b"] = b;
  setup["lambda"] = lambda;
  setup["adversary"] = std::string(adversary.name());
  setup["handle"] = "idealized-hiding";
  // Challenger-side record of the hidden inputs to Z.
  setup["hadamard_count"] = theta.hadamard_count();
  setup["beta"] = beta ? 1 : 0;
  t.append(std::move(setup));

  auto resp = adversary.respond(input, adv_rng);
  bool valid = resp.x_prime.size() == lambda;
  if (valid && variant == CelVariant::kPrivate) {
    for (std::size_t i = 0; i < lambda && valid; ++i)
      if (!theta.is_hadamard(i) && resp.x_prime[i] != x[i]) valid = false;
  } else if (valid) {
    valid = resp.signature && sig::verify(keys->vk, resp.x_prime, *resp.signature);
  }
  DeletionCert cert{resp.x_prime, resp.signature};
  t.append(cert_event(cert, valid));

  ExperimentResult r;
  r.b = b;
  r.hadamard_count = theta.hadamard_count();
  if (!valid) {
    r.output = ExperimentResult::Output::kBottom;
  } else {
    resp.residual.label = std::string(kOpaqueHandle) + "|" + resp.residual.label;
    r.output = ExperimentResult::Output::kResidual;
    r.residual = std::move(resp.residual);
  }
  return finish(std::move(r), std::move(t));
}

}  // namespace rcd::games
