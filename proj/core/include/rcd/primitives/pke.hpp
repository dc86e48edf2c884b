// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "rcd/bits.hpp"
#include "rcd/rng.hpp"

namespace rcd::pke {

inline constexpr std::size_t kSecretKeyBytes = 32;
inline constexpr std::size_t kPublicKeyBytes = 32;
inline constexpr std::size_t kNonceBytes = 16;
inline constexpr std::size_t kTagBytes = 16;
inline constexpr std::size_t kMaxMessageBytes = std::size_t{1} << 20;

struct KeyPair {
  Bytes pk;
  Bytes sk;
};

KeyPair keygen(Rng& rng);
/// pk is a function of sk; used by decrypt to recompute the tag key.
Bytes public_key_for(BytesView sk);

/// Deterministic given the explicit nonce `r` (kNonceBytes).
/// Layout: r || (m xor KDF(pk || r)) || tag.
Bytes encrypt(BytesView pk, BytesView m, BytesView r);
Bytes encrypt(BytesView pk, BytesView m, Rng& rng);

/// nullopt is the failure symbol: malformed input or tag mismatch (wrong key).
std::optional<Bytes> decrypt(BytesView sk, BytesView ct);

inline std::size_t ciphertext_bytes(std::size_t msg_len) { return kNonceBytes + msg_len + kTagBytes; }

}  // namespace rcd::pke
