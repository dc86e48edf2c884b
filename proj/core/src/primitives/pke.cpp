// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rcd/primitives/pke.hpp"

#include <algorithm>

#include "rcd/error.hpp"
#include "rcd/hash.hpp"

namespace rcd::pke {

namespace {

Bytes stream(BytesView pk, BytesView r, std::size_t len) {
  Bytes seed(pk.begin(), pk.end());
  seed.insert(seed.end(), r.begin(), r.end());
  return kdf("pke.stream", seed, len);
}

Bytes tag(BytesView pk, BytesView r, BytesView body) {
  Hasher h("pke.tag");
  h.update(pk).update(r).update(body);
  return digest_bytes(h.finish(), kTagBytes);
}

}  // namespace

KeyPair keygen(Rng& rng) {
  KeyPair kp;
  kp.sk = rng.bytes(kSecretKeyBytes);
  kp.pk = public_key_for(kp.sk);
  return kp;
}

Bytes public_key_for(BytesView sk) {
  if (sk.size() != kSecretKeyBytes) throw Error(Errc::kMalformedKey, "pke secret key must be 32 bytes");
  return digest_bytes(hash_domain("pke.pk", sk), kPublicKeyBytes);
}

Bytes encrypt(BytesView pk, BytesView m, BytesView r) {
  if (pk.size() != kPublicKeyBytes) throw Error(Errc::kMalformedKey, "pke public key must be 32 bytes");
  if (r.size() != kNonceBytes) throw Error(Errc::kLengthMismatch, "pke nonce must be 16 bytes");
  if (m.size() > kMaxMessageBytes) throw Error(Errc::kLengthMismatch, "pke message too long");
  Bytes ct(r.begin(), r.end());
  Bytes ks = stream(pk, r, m.size());
  for (std::size_t i = 0; i < m.size(); ++i) ct.push_back(static_cast<std::uint8_t>(m[i] ^ ks[i]));
  Bytes t = tag(pk, r, BytesView(ct).subspan(kNonceBytes));
  ct.insert(ct.end(), t.begin(), t.end());
  return ct;
}

Bytes encrypt(BytesView pk, BytesView m, Rng& rng) {
  Bytes r = rng.bytes(kNonceBytes);
  return encrypt(pk, m, r);
}

std::optional<Bytes> decrypt(BytesView sk, BytesView ct) {
  if (sk.size() != kSecretKeyBytes || ct.size() < kNonceBytes + kTagBytes) return std::nullopt;
  Bytes pk = public_key_for(sk);
  auto r = ct.subspan(0, kNonceBytes);
  auto body = ct.subspan(kNonceBytes, ct.size() - kNonceBytes - kTagBytes);
  auto got = ct.subspan(ct.size() - kTagBytes);
  Bytes want = tag(pk, r, body);
  if (!std::equal(want.begin(), want.end(), got.begin())) return std::nullopt;
  Bytes ks = stream(pk, r, body.size());
  Bytes m(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) m[i] = static_cast<std::uint8_t>(body[i] ^ ks[i]);
  return m;
}

}  // namespace rcd::pke
