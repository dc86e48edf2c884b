// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rcd/hash.hpp"

// Low-level SHA-256: deprecated in OpenSSL 3, but skips the per-hash EVP fetch.
#define OPENSSL_SUPPRESS_DEPRECATED
#include <openssl/sha.h>

namespace rcd {

namespace {
SHA256_CTX* ctx(std::array<std::uint8_t, 128>& state) { return reinterpret_cast<SHA256_CTX*>(state.data()); }
}  // namespace

static_assert(sizeof(SHA256_CTX) <= 128);

Hasher::Hasher() { SHA256_Init(ctx(state_)); }

Hasher& Hasher::update(BytesView data) {
  if (!data.empty()) SHA256_Update(ctx(state_), data.data(), data.size());
  return *this;
}

Hasher& Hasher::update_u64(std::uint64_t v) {
  std::uint8_t buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<std::uint8_t>(v >> (8 * i));
  return update(buf);
}

Hasher& Hasher::update_str(std::string_view s) {
  update_u64(s.size());
  return update(as_bytes(s));
}

Hasher& Hasher::update_bits(const BitString& bits) {
  update_u64(bits.size());
  return update(bits.to_bytes());
}

Digest Hasher::finish() {
  Digest out{};
  SHA256_Final(out.data(), ctx(state_));
  SHA256_Init(ctx(state_));
  return out;
}

Digest sha256(BytesView data) {
  Digest out{};
  SHA256(data.data(), data.size(), out.data());
  return out;
}

Digest hash_domain(std::string_view domain, BytesView data) {
  return Hasher(domain).update(data).finish();
}

Bytes kdf(std::string_view domain, BytesView seed, std::size_t out_len) {
  Bytes out;
  out.reserve(out_len + 32);
  Hasher h;
  for (std::uint64_t counter = 0; out.size() < out_len; ++counter) {
    h.update_str(domain).update(seed).update_u64(counter);
    auto block = h.finish();
    out.insert(out.end(), block.begin(), block.end());
  }
  out.resize(out_len);
  return out;
}

}  // namespace rcd
