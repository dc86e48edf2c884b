// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rcd/primitives/skecd.hpp"

#include "rcd/error.hpp"

namespace rcd::skecd {

Key::Key(std::size_t lambda, std::vector<Block> blocks) : lambda_(lambda), blocks_(std::move(blocks)) {
  for (const auto& b : blocks_)
    if (b.x.size() != lambda_ || b.theta.size() != lambda_)
      throw Error(Errc::kLengthMismatch, "SKE-CD block width differs from lambda");
}

BitString Key::to_bits() const {
  BitString out;
  for (const auto& b : blocks_) {
    out.append(b.x);
    out.append(b.theta.bits());
  }
  return out;
}

Key Key::from_bits(const BitString& bits, std::size_t message_bits, std::size_t lambda) {
  if (bits.size() != bit_width(message_bits, lambda))
    throw Error(Errc::kLengthMismatch, "SKE-CD key encoding has wrong width");
  std::vector<Block> blocks;
  for (std::size_t j = 0; j < message_bits; ++j) {
    std::size_t off = 2 * lambda * j;
    blocks.push_back({bits.slice(off, lambda), BasisString(bits.slice(off + lambda, lambda))});
  }
  return Key(lambda, std::move(blocks));
}

bool mask(const Block& block) {
  bool m = false;
  for (std::size_t i = 0; i < block.x.size(); ++i)
    if (!block.theta.is_hadamard(i)) m ^= block.x[i];
  return m;
}

Key keygen(std::size_t message_bits, std::size_t lambda, Rng& rng) {
  if (message_bits == 0 || lambda == 0) throw Error(Errc::kParameterError, "SKE-CD needs positive widths");
  std::vector<Block> blocks;
  for (std::size_t j = 0; j < message_bits; ++j) {
    BitString x = rng.bits(lambda);
    blocks.push_back({std::move(x), BasisString(rng.bits(lambda))});
  }
  return Key(lambda, std::move(blocks));
}

Ciphertext encrypt(Key& key, const BitString& m) {
  if (m.size() != key.message_bits())
    throw Error(Errc::kLengthMismatch, "message width differs from key block count");
  if (key.used_->exchange(true)) throw Error(Errc::kKeyReuse, "SKE-CD key already used for an encryption");
  Ciphertext ct;
  ct.classical = BitString(m.size());
  for (std::size_t j = 0; j < m.size(); ++j) {
    const auto& b = key.blocks()[j];
    ct.quantum.push_back(qstate::bb84_prepare(b.x, b.theta));
    ct.classical.set(j, m[j] ^ mask(b));
  }
  return ct;
}

std::optional<BitString> decrypt(const Key& key, const Ciphertext& ct, Rng& rng) {
  if (ct.quantum.size() != key.message_bits() || ct.classical.size() != key.message_bits()) return std::nullopt;
  BitString m(key.message_bits());
  for (std::size_t j = 0; j < m.size(); ++j) {
    const auto& b = key.blocks()[j];
    if (ct.quantum[j].n_wires() != key.lambda()) return std::nullopt;
    auto outcome = qstate::measure_in_basis(ct.quantum[j], b.theta, rng).outcome;
    bool parity = false;
    for (std::size_t i = 0; i < outcome.size(); ++i)
      if (!b.theta.is_hadamard(i)) parity ^= outcome[i];
    m.set(j, ct.classical[j] ^ parity);
  }
  return m;
}

DeletionCert delete_ciphertext(Ciphertext& ct, Rng& rng) {
  DeletionCert cert;
  for (auto& reg : ct.quantum) {
    auto m = qstate::measure_in_basis(reg, BasisString::hadamard(reg.n_wires()), rng);
    cert.payload.append(m.outcome);
    reg = std::move(m.post_state);
  }
  return cert;
}

bool verify(const Key& key, const DeletionCert& cert) {
  if (cert.signature || cert.payload.size() != key.lambda() * key.message_bits()) return false;
  for (std::size_t j = 0; j < key.message_bits(); ++j) {
    const auto& b = key.blocks()[j];
    for (std::size_t i = 0; i < key.lambda(); ++i)
      if (b.theta.is_hadamard(i) && cert.payload[j * key.lambda() + i] != b.x[i]) return false;
  }
  return true;
}

}  // namespace rcd::skecd
