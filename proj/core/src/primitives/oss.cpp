// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rcd/primitives/oss.hpp"

#include <algorithm>
#include <mutex>

#include "rcd/codec.hpp"
#include "rcd/error.hpp"
#include "rcd/hash.hpp"

namespace rcd::oss {

struct SecretKey::State {
  Bytes crs;
  Bytes seed;
  std::mutex mu;
  std::optional<bool> signed_message;
};

namespace {

Bytes preimage(BytesView crs, BytesView seed, bool m) {
  Hasher h("oss.preimage");
  h.update(crs).update(seed).update_u64(m ? 1 : 0);
  return digest_bytes(h.finish());
}

Bytes image(BytesView crs, BytesView pre) {
  Hasher h("oss.image");
  h.update(crs).update(pre);
  return digest_bytes(h.finish());
}

}  // namespace

Signature SecretKey::sign(bool message) {
  if (!state_) throw Error(Errc::kMalformedKey, "empty one-shot key");
  std::lock_guard<std::mutex> lock(state_->mu);
  if (state_->signed_message.has_value())
    throw Error(Errc::kOneShotConsumed, std::string("token already signed ") + (*state_->signed_message ? "1" : "0"));
  state_->signed_message = message;
  return {preimage(state_->crs, state_->seed, message)};
}

bool SecretKey::consumed() const { return signed_message().has_value(); }

std::optional<bool> SecretKey::signed_message() const {
  if (!state_) return std::nullopt;
  std::lock_guard<std::mutex> lock(state_->mu);
  return state_->signed_message;
}

Bytes SecretKey::serialize() const {
  if (!state_) throw Error(Errc::kMalformedKey, "empty one-shot key");
  std::lock_guard<std::mutex> lock(state_->mu);
  std::uint8_t flag = !state_->signed_message ? 0 : (*state_->signed_message ? 2 : 1);
  return ByteWriter().bytes(state_->crs).bytes(state_->seed).u8(flag).take();
}

SecretKey SecretKey::deserialize(BytesView in) {
  ByteReader r(in);
  auto s = std::make_shared<State>();
  s->crs = r.bytes();
  s->seed = r.bytes();
  std::uint8_t flag = r.u8();
  r.expect_done();
  if (flag > 2) throw Error(Errc::kDecodeError, "one-shot key state flag");
  if (flag != 0) s->signed_message = flag == 2;
  return SecretKey(std::move(s));
}

Crs setup(Rng& rng) { return {rng.bytes(kCrsBytes)}; }

KeyPair keygen(const Crs& crs, Rng& rng) {
  auto s = std::make_shared<SecretKey::State>();
  s->crs = crs.value;
  s->seed = rng.bytes(32);
  PublicKey pk;
  pk.value = image(crs.value, preimage(crs.value, s->seed, false));
  Bytes one = image(crs.value, preimage(crs.value, s->seed, true));
  pk.value.insert(pk.value.end(), one.begin(), one.end());
  return {std::move(pk), SecretKey(std::move(s))};
}

bool verify(const Crs& crs, const PublicKey& pk, const Signature& sigma, bool message) {
  if (crs.value.size() != kCrsBytes || pk.value.size() != 2 * kSignatureBytes) return false;
  if (sigma.value.size() != kSignatureBytes) return false;
  Bytes got = image(crs.value, sigma.value);
  auto want = BytesView(pk.value).subspan(message ? kSignatureBytes : 0, kSignatureBytes);
  return std::equal(got.begin(), got.end(), want.begin());
}

}  // namespace rcd::oss
