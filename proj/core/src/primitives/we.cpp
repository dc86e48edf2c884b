// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rcd/primitives/we.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "rcd/codec.hpp"
#include "rcd/error.hpp"
#include "rcd/hash.hpp"

namespace rcd::we {

namespace {

constexpr const char* kOssSignedZero = "oss-signed-0";

bool oss_signed_zero_relation(BytesView instance, BytesView witness) {
  try {
    ByteReader r(instance);
    oss::Crs crs{r.bytes()};
    oss::PublicKey pk{r.bytes()};
    r.expect_done();
    return oss::verify(crs, pk, oss::Signature{Bytes(witness.begin(), witness.end())}, false);
  } catch (const Error&) {
    return false;
  }
}

struct Registry {
  std::mutex mu;
  std::map<std::string, RelationFn> relations{{kOssSignedZero, oss_signed_zero_relation}};
};

Registry& registry() {
  static Registry r;
  return r;
}

RelationFn lookup(const std::string& id) {
  auto& reg = registry();
  std::lock_guard<std::mutex> lock(reg.mu);
  auto it = reg.relations.find(id);
  return it == reg.relations.end() ? RelationFn{} : it->second;
}

Bytes seal_stream(const Statement& st, BytesView nonce, std::size_t len) {
  Hasher h("we.statement");
  h.update_str(st.relation_id).update(st.instance).update(nonce);
  Digest d = h.finish();
  return kdf("we.stream", d, len);
}

Bytes seal_tag(const Statement& st, BytesView nonce, BytesView sealed) {
  Hasher h("we.tag");
  h.update_str(st.relation_id).update(st.instance).update(nonce).update(sealed);
  return digest_bytes(h.finish(), kTagBytes);
}

}  // namespace

void register_relation(const std::string& id, RelationFn fn) {
  auto& reg = registry();
  std::lock_guard<std::mutex> lock(reg.mu);
  reg.relations[id] = std::move(fn);
}

bool has_relation(const std::string& id) { return static_cast<bool>(lookup(id)); }

Statement oss_signed_zero(const oss::Crs& crs, const oss::PublicKey& pk) {
  return {kOssSignedZero, ByteWriter().bytes(crs.value).bytes(pk.value).take()};
}

Bytes Ciphertext::serialize() const {
  return ByteWriter()
      .str(statement.relation_id)
      .bytes(statement.instance)
      .raw(nonce)
      .bytes(sealed)
      .raw(tag)
      .take();
}

Ciphertext Ciphertext::deserialize(BytesView in) {
  ByteReader r(in);
  Ciphertext ct;
  ct.statement.relation_id = r.str();
  ct.statement.instance = r.bytes();
  ct.nonce = r.raw(kNonceBytes);
  ct.sealed = r.bytes();
  ct.tag = r.raw(kTagBytes);
  r.expect_done();
  return ct;
}

Ciphertext encrypt(const Statement& statement, BytesView m, Rng& rng) {
  if (!has_relation(statement.relation_id))
    throw Error(Errc::kParameterError, "unknown witness relation '" + statement.relation_id + "'");
  Ciphertext ct;
  ct.statement = statement;
  ct.nonce = rng.bytes(kNonceBytes);
  Bytes ks = seal_stream(statement, ct.nonce, m.size());
  ct.sealed.resize(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) ct.sealed[i] = static_cast<std::uint8_t>(m[i] ^ ks[i]);
  ct.tag = seal_tag(statement, ct.nonce, ct.sealed);
  return ct;
}

std::optional<Bytes> decrypt(const Ciphertext& ct, BytesView witness) {
  auto relation = lookup(ct.statement.relation_id);
  if (!relation || witness.empty() || !relation(ct.statement.instance, witness)) return std::nullopt;
  if (ct.nonce.size() != kNonceBytes || ct.tag != seal_tag(ct.statement, ct.nonce, ct.sealed)) return std::nullopt;
  Bytes ks = seal_stream(ct.statement, ct.nonce, ct.sealed.size());
  Bytes m(ct.sealed.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<std::uint8_t>(ct.sealed[i] ^ ks[i]);
  return m;
}

std::size_t ciphertext_bytes(const Statement& statement, std::size_t msg_len) {
  return 4 + statement.relation_id.size() + 4 + statement.instance.size() + kNonceBytes + 4 + msg_len + kTagBytes;
}

}  // namespace rcd::we
