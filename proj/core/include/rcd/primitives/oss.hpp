// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>

#include "rcd/bits.hpp"
#include "rcd/rng.hpp"

namespace rcd::oss {

inline constexpr std::size_t kCrsBytes = 32;
inline constexpr std::size_t kSignatureBytes = 32;

struct Crs {
  Bytes value;
  friend bool operator==(const Crs&, const Crs&) = default;
};

struct PublicKey {
  Bytes value;  // image of the bit-0 preimage || image of the bit-1 preimage
  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

struct Signature {
  Bytes value;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Sign-once capability. Copies share the same token, so signing through any
/// copy consumes all of them (no-cloning by construction). Thread-safe.
class SecretKey {
 public:
  SecretKey() = default;

  Signature sign(bool message);
  bool consumed() const;
  /// Message signed by the consuming call, if any.
  std::optional<bool> signed_message() const;
  bool valid() const noexcept { return state_ != nullptr; }

  /// Simulation artifact: the token state as bytes (seed and consumed flag).
  Bytes serialize() const;
  static SecretKey deserialize(BytesView in);

 private:
  friend struct KeyPair keygen(const Crs& crs, Rng& rng);
  struct State;
  explicit SecretKey(std::shared_ptr<State> s) : state_(std::move(s)) {}
  std::shared_ptr<State> state_;
};

struct KeyPair {
  PublicKey pk;
  SecretKey sk;
};

Crs setup(Rng& rng);
KeyPair keygen(const Crs& crs, Rng& rng);
bool verify(const Crs& crs, const PublicKey& pk, const Signature& sigma, bool message);

}  // namespace rcd::oss
