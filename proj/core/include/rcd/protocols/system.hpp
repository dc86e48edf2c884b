// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "rcd/protocols/protocols.hpp"

namespace rcd::protocols {

struct SchemeParams {
  std::size_t lambda = 16;
  std::size_t tau = 8;
  std::size_t message_bits = 8;
  std::size_t max_depth = rabe::kDefaultMaxDepth;

  /// ParameterError on zero sizes.
  void validate() const;
  nlohmann::json to_json() const;
  static SchemeParams from_json(const nlohmann::json& j);
  friend bool operator==(const SchemeParams&, const SchemeParams&) = default;
};

// Shad-backed schemes hold the first alternative, RABE-backed ones the second.
using AnyPublicKey = std::variant<shad::PublicKey, rabe::PublicKey>;
using AnySecretKey = std::variant<shad::SecretKey, rabe::SecretKey>;
using AnyHelperKey = std::variant<shad::HelperSecretKey, rabe::HelperSecretKey>;

Bytes serialize_key(const AnyPublicKey& pk);
Bytes serialize_key(const AnySecretKey& sk);
Bytes serialize_key(const AnyHelperKey& hsk);
AnyPublicKey deserialize_public_key(SchemeTag s, BytesView in);
AnySecretKey deserialize_secret_key(SchemeTag s, BytesView in);
AnyHelperKey deserialize_helper_key(SchemeTag s, BytesView in);
/// Merkle path length of a helper key (the first cell for Shad keys).
std::size_t path_length(const AnyHelperKey& hsk);

struct UserKey {
  AnyPublicKey pk;
  AnySecretKey sk;
  rabe::Policy policy;
};

/// One scheme instance: CRS plus the curator directory and its history, so
/// ciphertexts can be produced under any earlier master public key.
class System {
 public:
  static System setup(SchemeTag scheme, const SchemeParams& params, Rng& rng);

  SchemeTag scheme() const noexcept { return scheme_; }
  const SchemeParams& params() const noexcept { return params_; }
  /// Registrations so far.
  std::size_t epoch() const noexcept { return history_size() - 1; }

  UserKey keygen(const rabe::Policy& policy, Rng& rng) const;
  /// RegPK on the current directory. Returns the new epoch.
  std::size_t register_key(const AnyPublicKey& pk, const rabe::Policy& policy);
  AnyHelperKey update(const AnyPublicKey& pk) const;

  Encrypted encrypt(const BitString& x, const BitString& mu, Rng& rng) const { return encrypt_at(epoch(), x, mu, rng); }
  /// Encrypts under mpk_epoch. PubVCD runs the in-process session.
  Encrypted encrypt_at(std::size_t epoch, const BitString& x, const BitString& mu, Rng& rng) const;
  DecryptResult<BitString> decrypt(const AnySecretKey& sk, const AnyHelperKey& hsk, const BitString& x,
                                   HybridCiphertext& ct, Rng& rng) const;
  static DeletionCert erase(HybridCiphertext& ct, Rng& rng);
  static bool verify(const VerificationKey& vk, const DeletionCert& cert);

  /// ParameterError when the scheme uses the other backend.
  const shad::Crs& shad_crs() const;
  const rabe::Crs& rabe_crs() const;
  const shad::AuxState& shad_aux(std::size_t epoch) const;
  const rabe::AuxState& rabe_aux(std::size_t epoch) const;
  const std::vector<std::pair<AnyPublicKey, rabe::Policy>>& registrations() const noexcept { return registered_; }

  /// CRS and registration log; from_json replays the log.
  nlohmann::json to_json() const;
  static System from_json(const nlohmann::json& j);

 private:
  System() = default;
  std::size_t history_size() const;
  void check_epoch(std::size_t epoch) const;

  SchemeTag scheme_ = SchemeTag::kPriVCD;
  SchemeParams params_;
  std::shared_ptr<const shad::Crs> shad_crs_;
  std::shared_ptr<const rabe::Crs> rabe_crs_;
  std::vector<shad::AuxState> shad_history_;
  std::vector<rabe::AuxState> rabe_history_;
  std::vector<std::pair<AnyPublicKey, rabe::Policy>> registered_;
};

}  // namespace rcd::protocols
