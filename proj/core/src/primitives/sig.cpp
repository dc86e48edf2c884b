// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rcd/primitives/sig.hpp"

#include <algorithm>

#include "rcd/codec.hpp"
#include "rcd/error.hpp"
#include "rcd/hash.hpp"

namespace rcd::sig {

namespace {

struct Parsed {
  std::size_t msg_bits;
  Bytes seed;
};

Parsed parse_sigk(BytesView sigk) {
  ByteReader r(sigk);
  Parsed p{};
  try {
    p.msg_bits = r.u32();
    p.seed = r.raw(kSeedBytes);
    r.expect_done();
  } catch (const Error&) {
    throw Error(Errc::kMalformedKey, "signing key is malformed");
  }
  if (p.msg_bits == 0) throw Error(Errc::kMalformedKey, "signing key has zero message width");
  return p;
}

Bytes preimage(const Bytes& seed, std::size_t i, bool b) {
  Hasher h("sig.preimage");
  h.update(seed).update_u64(i).update_u64(b ? 1 : 0);
  return digest_bytes(h.finish(), kPreimageBytes);
}

Bytes image(BytesView pre) { return digest_bytes(hash_domain("sig.image", pre), kPreimageBytes); }

}  // namespace

KeyPair gen(std::size_t msg_bits, Rng& rng) {
  if (msg_bits == 0) throw Error(Errc::kParameterError, "signature message width must be positive");
  KeyPair kp;
  kp.sigk = ByteWriter().u32(static_cast<std::uint32_t>(msg_bits)).raw(rng.bytes(kSeedBytes)).take();
  kp.vk = verification_key_for(kp.sigk);
  kp.msg_bits = msg_bits;
  kp.sig_width = signature_width(msg_bits);
  return kp;
}

std::size_t message_bits(BytesView sigk) { return parse_sigk(sigk).msg_bits; }

Bytes verification_key_for(BytesView sigk) {
  auto p = parse_sigk(sigk);
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(p.msg_bits));
  for (std::size_t i = 0; i < p.msg_bits; ++i) {
    w.raw(image(preimage(p.seed, i, false)));
    w.raw(image(preimage(p.seed, i, true)));
  }
  return w.take();
}

BitString sign(BytesView sigk, const BitString& m) {
  auto p = parse_sigk(sigk);
  if (m.size() != p.msg_bits)
    throw Error(Errc::kLengthMismatch, "message has " + std::to_string(m.size()) + " bits, key signs " +
                                           std::to_string(p.msg_bits));
  Bytes out;
  out.reserve(p.msg_bits * kPreimageBytes);
  for (std::size_t i = 0; i < p.msg_bits; ++i) {
    Bytes pre = preimage(p.seed, i, m[i]);
    out.insert(out.end(), pre.begin(), pre.end());
  }
  return BitString::from_bytes(out, out.size() * 8);
}

bool verify(BytesView vk, const BitString& m, const BitString& sigma) {
  if (vk.size() < 4) return false;
  ByteReader r(vk);
  std::size_t bits = r.u32();
  if (vk.size() != 4 + bits * 2 * kPreimageBytes) return false;
  if (m.size() != bits || sigma.size() != signature_width(bits)) return false;
  Bytes sig_bytes = sigma.to_bytes();
  for (std::size_t i = 0; i < bits; ++i) {
    BytesView pre(sig_bytes.data() + i * kPreimageBytes, kPreimageBytes);
    BytesView want = vk.subspan(4 + (2 * i + (m[i] ? 1 : 0)) * kPreimageBytes, kPreimageBytes);
    Bytes got = image(pre);
    if (!std::equal(got.begin(), got.end(), want.begin())) return false;
  }
  return true;
}

}  // namespace rcd::sig
