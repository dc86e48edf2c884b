// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rcd/primitives/zka.hpp"

#include "rcd/codec.hpp"
#include "rcd/error.hpp"

namespace rcd::zka {

namespace {

Digest marker(std::string_view domain, const Digest& statement, BytesView y) {
  Hasher h(domain);
  h.update_digest(statement).update(y);
  return h.finish();
}

}  // namespace

Digest Statement::digest() const {
  Hasher h("zka.statement");
  h.update_str(relation).update(body);
  return h.finish();
}

Bytes ProofObject::serialize() const {
  return ByteWriter().digest(statement_digest).u8(accept ? 1 : 0).digest(tag).take();
}

ProofObject ProofObject::deserialize(BytesView in) {
  ByteReader r(in);
  ProofObject p;
  p.statement_digest = r.digest();
  std::uint8_t a = r.u8();
  if (a > 1) throw Error(Errc::kDecodeError, "proof accept flag must be 0 or 1");
  p.accept = a == 1;
  p.tag = r.digest();
  r.expect_done();
  return p;
}

ProofObject prove(const Statement& statement, BytesView witness, BytesView y, const RelationCheck& relation) {
  if (!relation || !relation(statement, witness))
    throw Error(Errc::kBadWitness, "witness does not satisfy relation '" + statement.relation + "'");
  ProofObject p;
  p.statement_digest = statement.digest();
  p.accept = true;
  p.tag = marker("zka.real", p.statement_digest, y);
  return p;
}

bool verify(const Statement& statement, const ProofObject& proof, BytesView y) {
  if (!proof.accept || proof.statement_digest != statement.digest()) return false;
  return proof.tag == marker("zka.real", proof.statement_digest, y) ||
         proof.tag == marker("zka.sim", proof.statement_digest, y);
}

ProofObject simulate(const Statement& statement, BytesView y) {
  ProofObject p;
  p.statement_digest = statement.digest();
  p.accept = true;
  p.tag = marker("zka.sim", p.statement_digest, y);
  return p;
}

}  // namespace rcd::zka
