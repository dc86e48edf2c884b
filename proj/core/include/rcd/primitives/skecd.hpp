// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <memory>
#include <optional>
#include <vector>

#include "rcd/bits.hpp"
#include "rcd/primitives/cert.hpp"
#include "rcd/qstate.hpp"
#include "rcd/rng.hpp"

namespace rcd::skecd {

struct Block {
  BitString x;
  BasisString theta;
};

/// One-time key. Copies share the "used" flag, so a key cannot be reused
/// through a copy either.
class Key {
 public:
  Key() = default;
  Key(std::size_t lambda, std::vector<Block> blocks);

  std::size_t lambda() const noexcept { return lambda_; }
  std::size_t message_bits() const noexcept { return blocks_.size(); }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  bool used() const noexcept { return used_ && used_->load(); }

  /// Per block x then theta: 2 * lambda * message_bits bits.
  BitString to_bits() const;
  static Key from_bits(const BitString& bits, std::size_t message_bits, std::size_t lambda);
  static std::size_t bit_width(std::size_t message_bits, std::size_t lambda) { return 2 * lambda * message_bits; }

 private:
  friend struct Ciphertext encrypt(Key& key, const BitString& m);
  std::size_t lambda_ = 0;
  std::vector<Block> blocks_;
  std::shared_ptr<std::atomic<bool>> used_ = std::make_shared<std::atomic<bool>>(false);
};

struct Ciphertext {
  std::vector<qstate::QReg> quantum;  // block j is |x_j>_{theta_j} when fresh
  BitString classical;                // m_j xor parity of x_j on theta_j = 0 positions
};

/// Mask bit for one block: xor of x_i over computational positions.
bool mask(const Block& block);

Key keygen(std::size_t message_bits, std::size_t lambda, Rng& rng);
/// KeyReuse on the second call with the same key.
Ciphertext encrypt(Key& key, const BitString& m);
/// Measures each block in its own basis; nullopt on shape mismatch.
std::optional<BitString> decrypt(const Key& key, const Ciphertext& ct, Rng& rng);
/// Measures every block in the Hadamard basis; the ciphertext keeps the
/// collapsed state. Certificate is the concatenated outcomes.
DeletionCert delete_ciphertext(Ciphertext& ct, Rng& rng);
bool verify(const Key& key, const DeletionCert& cert);

}  // namespace rcd::skecd
