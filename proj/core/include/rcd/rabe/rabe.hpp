// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rcd/bits.hpp"
#include "rcd/hash.hpp"
#include "rcd/rabe/policy.hpp"
#include "rcd/result.hpp"
#include "rcd/rng.hpp"

namespace rcd::rabe {

inline constexpr std::size_t kSaltBytes = 16;
inline constexpr std::size_t kCommitmentBytes = 16;
inline constexpr std::size_t kRandomnessBytes = 16;
inline constexpr std::size_t kDefaultMaxDepth = 16;

struct Crs {
  std::size_t lambda = 0;
  std::size_t tau = 0;
  Bytes hash_params;  // salt for every directory hash
  std::size_t max_depth = kDefaultMaxDepth;

  Digest digest() const;
  Bytes serialize() const;
  static Crs deserialize(BytesView in);
  nlohmann::json to_json() const;
  static Crs from_json(const nlohmann::json& j);
  friend bool operator==(const Crs&, const Crs&) = default;
};

struct PublicKey {
  Bytes pke_pk;
  Bytes policy_commitment;

  Bytes serialize() const;
  static PublicKey deserialize(BytesView in);
  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

struct SecretKey {
  Bytes pke_sk;
  Policy policy;

  PublicKey public_key() const;
  Bytes serialize() const;
  static SecretKey deserialize(BytesView in);
};

struct Slot {
  PublicKey pk;
  Policy policy;
};

struct MasterPublicKey {
  Digest merkle_root{};
  std::size_t epoch = 0;
  Digest crs_digest{};

  Bytes serialize() const;
  static MasterPublicKey deserialize(BytesView in);
  friend bool operator==(const MasterPublicKey&, const MasterPublicKey&) = default;
};

struct HelperSecretKey {
  std::size_t slot_index = 0;
  std::size_t epoch = 0;
  std::vector<Digest> merkle_path;

  Bytes serialize() const;
  static HelperSecretKey deserialize(BytesView in);
  friend bool operator==(const HelperSecretKey&, const HelperSecretKey&) = default;
};

struct CiphertextEntry {
  std::size_t slot_index = 0;
  Bytes pke_ct;
  friend bool operator==(const CiphertextEntry&, const CiphertextEntry&) = default;
};

struct Ciphertext {
  std::size_t epoch = 0;
  Digest root_binding{};
  std::vector<CiphertextEntry> entries;

  Bytes serialize() const;
  static Ciphertext deserialize(BytesView in);
  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

/// Curator directory. Persistent: with_registration returns a new snapshot and
/// leaves this one untouched; snapshots share slot storage.
class AuxState {
 public:
  AuxState() = default;
  /// Empty directory (epoch 0) for `crs`.
  explicit AuxState(const Crs& crs);

  std::size_t epoch() const noexcept { return slots_.size(); }
  /// Root of the current tree; a default-constructed directory has none and throws.
  const Digest& root() const;
  /// historical_roots()[e] is the root after e registrations.
  const std::vector<Digest>& historical_roots() const noexcept { return roots_; }
  const Slot& slot(std::size_t index) const { return *slots_.at(index); }
  const Bytes& salt() const noexcept { return salt_; }

  /// Sibling digests from leaf `index` to the root of the current tree.
  std::vector<Digest> path(std::size_t index) const;
  AuxState with_registration(Slot slot) const;

  /// One JSON object per slot: index, pk (hex), policy AST.
  std::string to_json_lines() const;
  static AuxState from_json_lines(const Crs& crs, std::string_view text);

 private:
  void rebuild();

  Bytes salt_;
  std::vector<std::shared_ptr<const Slot>> slots_;
  std::vector<std::vector<Digest>> levels_;  // levels_[0] = padded leaves
  std::vector<Digest> roots_;
};

Digest leaf_hash(BytesView salt, std::size_t index, const PublicKey& pk, const Policy& policy);
Digest node_hash(const Digest& left, const Digest& right);
Digest empty_root(BytesView salt);
/// Checks a path for slot `index` of a directory with `epoch` slots.
bool verify_path(BytesView salt, std::size_t index, std::size_t epoch, const PublicKey& pk, const Policy& policy,
                 const std::vector<Digest>& path, const Digest& root);
std::size_t ceil_log2(std::size_t n);
Bytes policy_commitment(const Policy& policy);

Crs setup(std::size_t lambda, std::size_t tau, Rng& rng, std::size_t max_depth = kDefaultMaxDepth);
/// `aux` may be null: the reference ignores it.
std::pair<PublicKey, SecretKey> keygen(const Crs& crs, const AuxState* aux, const Policy& policy, Rng& rng);
std::pair<MasterPublicKey, AuxState> regpk(const Crs& crs, const AuxState& aux, const PublicKey& pk,
                                           const Policy& policy);
MasterPublicKey master_public_key(const Crs& crs, const AuxState& aux);

/// `view` is the public directory the encryptor reads; StaleView if it does not
/// match mpk. Deterministic given `r` (kRandomnessBytes).
Ciphertext encrypt(const MasterPublicKey& mpk, const BitString& x, BytesView m, BytesView r, const AuxState& view);
Ciphertext encrypt(const MasterPublicKey& mpk, const BitString& x, BytesView m, Rng& rng, const AuxState& view);

/// Deterministic; NotRegistered when pk has no slot. First matching slot wins.
HelperSecretKey update(const Crs& crs, const AuxState& aux, const PublicKey& pk);
/// Update for a specific slot (multi-registration).
HelperSecretKey update_slot(const Crs& crs, const AuxState& aux, std::size_t slot_index);

/// GetUpdate if hsk is older than ct; bottom when the slot has no entry, the
/// path fails (same-epoch only), the policy rejects x, or PKE fails.
DecryptResult<Bytes> decrypt(const Crs& crs, const SecretKey& sk, const HelperSecretKey& hsk, const BitString& x,
                             const Ciphertext& ct);

}  // namespace rcd::rabe
