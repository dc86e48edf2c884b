// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "rcd/bits.hpp"
#include "rcd/rng.hpp"

namespace rcd::sig {

/// Lamport one-time signature over fixed-width bit messages. Preimages are
/// derived from a 32-byte seed, so sigk is short enough to ride inside a
/// ciphertext while signatures stay deterministic.
inline constexpr std::size_t kPreimageBytes = 16;
inline constexpr std::size_t kSeedBytes = 32;

struct KeyPair {
  Bytes vk;
  Bytes sigk;
  std::size_t msg_bits = 0;
  std::size_t sig_width = 0;
};

inline std::size_t signature_width(std::size_t msg_bits) { return msg_bits * kPreimageBytes * 8; }

KeyPair gen(std::size_t msg_bits, Rng& rng);
/// vk recomputed from sigk (sigk encodes msg_bits and the seed).
Bytes verification_key_for(BytesView sigk);
std::size_t message_bits(BytesView sigk);

BitString sign(BytesView sigk, const BitString& m);
bool verify(BytesView vk, const BitString& m, const BitString& sigma);

}  // namespace rcd::sig
