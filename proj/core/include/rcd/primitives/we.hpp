// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>

#include "rcd/bits.hpp"
#include "rcd/primitives/oss.hpp"
#include "rcd/rng.hpp"

namespace rcd::we {

inline constexpr std::size_t kNonceBytes = 16;
inline constexpr std::size_t kTagBytes = 16;

struct Statement {
  std::string relation_id;
  Bytes instance;
  friend bool operator==(const Statement&, const Statement&) = default;
};

struct Ciphertext {
  Statement statement;
  Bytes nonce;
  Bytes sealed;
  Bytes tag;

  Bytes serialize() const;
  static Ciphertext deserialize(BytesView in);
  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

using RelationFn = std::function<bool(BytesView instance, BytesView witness)>;

/// Process-wide relation table consulted by decrypt. "oss-signed-0" is built in.
void register_relation(const std::string& id, RelationFn fn);
bool has_relation(const std::string& id);

/// Statement "there is sigma with OSS.Verify(crs, pk, sigma, 0)".
Statement oss_signed_zero(const oss::Crs& crs, const oss::PublicKey& pk);

Ciphertext encrypt(const Statement& statement, BytesView m, Rng& rng);
/// nullopt when the relation rejects the witness (or the ciphertext is damaged).
std::optional<Bytes> decrypt(const Ciphertext& ct, BytesView witness);

/// Serialized size, fixed for a given statement and message length.
std::size_t ciphertext_bytes(const Statement& statement, std::size_t msg_len);

}  // namespace rcd::we
