// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rcd/protocols/system.hpp"

#include "rcd/error.hpp"

namespace rcd::protocols {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

template <typename T, typename V>
const T& expect(const V& v, const char* what) {
  if (const auto* p = std::get_if<T>(&v)) return *p;
  throw Error(Errc::kParameterError, std::string(what) + " belongs to the other backend");
}

}  // namespace

void SchemeParams::validate() const {
  if (lambda == 0 || tau == 0 || message_bits == 0 || max_depth == 0)
    throw Error(Errc::kParameterError, "lambda, tau, message_bits and max_depth must be positive");
}

json SchemeParams::to_json() const {
  return {{"lambda", lambda}, {"tau", tau}, {"message_bits", message_bits}, {"max_depth", max_depth}};
}

SchemeParams SchemeParams::from_json(const json& j) {
  SchemeParams p;
  p.lambda = j.value("lambda", p.lambda);
  p.tau = j.value("tau", p.tau);
  p.message_bits = j.value("message_bits", p.message_bits);
  p.max_depth = j.value("max_depth", p.max_depth);
  p.validate();
  return p;
}

Bytes serialize_key(const AnyPublicKey& pk) {
  return std::visit([](const auto& k) { return k.serialize(); }, pk);
}

Bytes serialize_key(const AnySecretKey& sk) {
  return std::visit(Overloaded{[](const shad::SecretKey& k) { return shad::serialize_secret_key(k); },
                               [](const rabe::SecretKey& k) { return k.serialize(); }},
                    sk);
}

Bytes serialize_key(const AnyHelperKey& hsk) {
  return std::visit([](const auto& k) { return k.serialize(); }, hsk);
}

AnyPublicKey deserialize_public_key(SchemeTag s, BytesView in) {
  if (uses_shad(s)) return shad::PublicKey::deserialize(in);
  return rabe::PublicKey::deserialize(in);
}

AnySecretKey deserialize_secret_key(SchemeTag s, BytesView in) {
  if (uses_shad(s)) return shad::deserialize_secret_key(in);
  return rabe::SecretKey::deserialize(in);
}

AnyHelperKey deserialize_helper_key(SchemeTag s, BytesView in) {
  if (uses_shad(s)) return shad::HelperSecretKey::deserialize(in);
  return rabe::HelperSecretKey::deserialize(in);
}

std::size_t path_length(const AnyHelperKey& hsk) {
  return std::visit(Overloaded{[](const shad::HelperSecretKey& k) { return k.grid.at(0, 0).merkle_path.size(); },
                               [](const rabe::HelperSecretKey& k) { return k.merkle_path.size(); }},
                    hsk);
}

System System::setup(SchemeTag scheme, const SchemeParams& params, Rng& rng) {
  params.validate();
  System s;
  s.scheme_ = scheme;
  s.params_ = params;
  if (uses_shad(scheme)) {
    std::size_t width = scheme == SchemeTag::kPriVCD ? privcd_shad_width(params.message_bits, params.lambda)
                                                      : pubvcd_shad_width(params.message_bits);
    s.shad_crs_ = std::make_shared<const shad::Crs>(
        shad::setup(params.lambda, params.tau, width, rng, params.max_depth));
    s.shad_history_.push_back(shad::empty_aux(*s.shad_crs_));
  } else {
    s.rabe_crs_ = std::make_shared<const rabe::Crs>(rabe::setup(params.lambda, params.tau, rng, params.max_depth));
    s.rabe_history_.emplace_back(*s.rabe_crs_);
  }
  return s;
}

std::size_t System::history_size() const {
  return uses_shad(scheme_) ? shad_history_.size() : rabe_history_.size();
}

void System::check_epoch(std::size_t epoch) const {
  if (epoch >= history_size())
    throw Error(Errc::kParameterError,
                "epoch " + std::to_string(epoch) + " is ahead of the directory (" + std::to_string(this->epoch()) + ")");
}

UserKey System::keygen(const rabe::Policy& policy, Rng& rng) const {
  if (uses_shad(scheme_)) {
    auto [pk, sk] = shad::keygen(*shad_crs_, &shad_history_.back(), policy, rng);
    return {std::move(pk), std::move(sk), policy};
  }
  auto [pk, sk] = rabe::keygen(*rabe_crs_, &rabe_history_.back(), policy, rng);
  return {std::move(pk), std::move(sk), policy};
}

std::size_t System::register_key(const AnyPublicKey& pk, const rabe::Policy& policy) {
  if (uses_shad(scheme_)) {
    auto next = shad::regpk(*shad_crs_, shad_history_.back(), expect<shad::PublicKey>(pk, "public key"), policy);
    shad_history_.push_back(std::move(next.second));
  } else {
    auto next = rabe::regpk(*rabe_crs_, rabe_history_.back(), expect<rabe::PublicKey>(pk, "public key"), policy);
    rabe_history_.push_back(std::move(next.second));
  }
  registered_.emplace_back(pk, policy);
  return epoch();
}

AnyHelperKey System::update(const AnyPublicKey& pk) const {
  if (uses_shad(scheme_))
    return shad::update(*shad_crs_, shad_history_.back(), expect<shad::PublicKey>(pk, "public key"));
  return rabe::update(*rabe_crs_, rabe_history_.back(), expect<rabe::PublicKey>(pk, "public key"));
}

Encrypted System::encrypt_at(std::size_t epoch, const BitString& x, const BitString& mu, Rng& rng) const {
  check_epoch(epoch);
  if (mu.size() != params_.message_bits)
    throw Error(Errc::kLengthMismatch, "message has " + std::to_string(mu.size()) + " bits, scheme expects " +
                                           std::to_string(params_.message_bits));
  switch (scheme_) {
    case SchemeTag::kPriVCD: {
      const auto& aux = shad_history_[epoch];
      return privcd_encrypt(shad::master_public_key(*shad_crs_, aux), x, mu, rng, aux);
    }
    case SchemeTag::kPubVCD: {
      const auto& aux = shad_history_[epoch];
      auto session =
          pubvcd_encrypt_session(shad::master_public_key(*shad_crs_, aux), x, mu, rng, aux, params_.lambda);
      return {std::move(session.vk), std::move(session.ct)};
    }
    case SchemeTag::kPriVCED: {
      const auto& aux = rabe_history_[epoch];
      return privced_encrypt_many(rabe::master_public_key(*rabe_crs_, aux), x, mu, rng, aux, params_.lambda);
    }
    case SchemeTag::kPubVCED: {
      const auto& aux = rabe_history_[epoch];
      return pubvced_encrypt_many(rabe::master_public_key(*rabe_crs_, aux), x, mu, rng, aux, params_.lambda);
    }
  }
  throw Error(Errc::kParameterError, "unknown scheme");
}

DecryptResult<BitString> System::decrypt(const AnySecretKey& sk, const AnyHelperKey& hsk, const BitString& x,
                                         HybridCiphertext& ct, Rng& rng) const {
  if (ct.scheme != scheme_) throw Error(Errc::kParameterError, "ciphertext belongs to another scheme");
  switch (scheme_) {
    case SchemeTag::kPriVCD:
      return privcd_decrypt(expect<shad::SecretKey>(sk, "secret key"), expect<shad::HelperSecretKey>(hsk, "helper key"),
                            x, ct, rng);
    case SchemeTag::kPubVCD:
      return pubvcd_decrypt(expect<shad::SecretKey>(sk, "secret key"), expect<shad::HelperSecretKey>(hsk, "helper key"),
                            x, ct);
    case SchemeTag::kPriVCED:
      return privced_decrypt(*rabe_crs_, expect<rabe::SecretKey>(sk, "secret key"),
                             expect<rabe::HelperSecretKey>(hsk, "helper key"), x, ct, rng);
    case SchemeTag::kPubVCED:
      return pubvced_decrypt(*rabe_crs_, expect<rabe::SecretKey>(sk, "secret key"),
                             expect<rabe::HelperSecretKey>(hsk, "helper key"), x, ct, rng);
  }
  throw Error(Errc::kParameterError, "unknown scheme");
}

DeletionCert System::erase(HybridCiphertext& ct, Rng& rng) {
  switch (ct.scheme) {
    case SchemeTag::kPriVCD:
      return privcd_delete(ct, rng);
    case SchemeTag::kPubVCD:
      return pubvcd_delete(ct);
    case SchemeTag::kPriVCED:
      return privced_delete(ct, rng);
    case SchemeTag::kPubVCED:
      return pubvced_delete(ct, rng);
  }
  throw Error(Errc::kParameterError, "unknown scheme");
}

bool System::verify(const VerificationKey& vk, const DeletionCert& cert) {
  switch (vk.scheme) {
    case SchemeTag::kPriVCD:
      return privcd_verify(vk, cert);
    case SchemeTag::kPubVCD:
      return pubvcd_verify(vk, cert);
    case SchemeTag::kPriVCED:
      return privced_verify(vk, cert);
    case SchemeTag::kPubVCED:
      return pubvced_verify(vk, cert);
  }
  return false;
}

const shad::Crs& System::shad_crs() const {
  if (!shad_crs_) throw Error(Errc::kParameterError, std::string(to_string(scheme_)) + " has no Shad CRS");
  return *shad_crs_;
}

const rabe::Crs& System::rabe_crs() const {
  if (!rabe_crs_) throw Error(Errc::kParameterError, std::string(to_string(scheme_)) + " has no RABE CRS");
  return *rabe_crs_;
}

const shad::AuxState& System::shad_aux(std::size_t epoch) const {
  shad_crs();
  check_epoch(epoch);
  return shad_history_[epoch];
}

const rabe::AuxState& System::rabe_aux(std::size_t epoch) const {
  rabe_crs();
  check_epoch(epoch);
  return rabe_history_[epoch];
}

json System::to_json() const {
  json regs = json::array();
  for (const auto& [pk, policy] : registered_)
    regs.push_back({{"pk", to_hex(serialize_key(pk))}, {"policy", policy.to_string()}});
  Bytes crs = uses_shad(scheme_) ? shad_crs_->serialize() : rabe_crs_->serialize();
  return {{"scheme", std::string(to_string(scheme_))},
          {"params", params_.to_json()},
          {"crs", to_hex(crs)},
          {"registrations", regs}};
}

System System::from_json(const json& j) {
  try {
    System s;
    s.scheme_ = scheme_from_string(j.at("scheme").get<std::string>());
    s.params_ = SchemeParams::from_json(j.at("params"));
    Bytes crs = from_hex(j.at("crs").get<std::string>());
    if (uses_shad(s.scheme_)) {
      s.shad_crs_ = std::make_shared<const shad::Crs>(shad::Crs::deserialize(crs));
      s.shad_history_.push_back(shad::empty_aux(*s.shad_crs_));
    } else {
      s.rabe_crs_ = std::make_shared<const rabe::Crs>(rabe::Crs::deserialize(crs));
      s.rabe_history_.emplace_back(*s.rabe_crs_);
    }
    for (const auto& r : j.at("registrations"))
      s.register_key(deserialize_public_key(s.scheme_, from_hex(r.at("pk").get<std::string>())),
                     rabe::Policy::parse(r.at("policy").get<std::string>()));
    return s;
  } catch (const json::exception& e) {
    throw Error(Errc::kDecodeError, std::string("system JSON: ") + e.what());
  }
}

}  // namespace rcd::protocols
