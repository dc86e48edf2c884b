// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>

#include "rcd/bits.hpp"
#include "rcd/hash.hpp"

namespace rcd::zka {

/// Statement as an opaque, canonically encoded body under a relation name.
struct Statement {
  std::string relation;
  Bytes body;

  Digest digest() const;
};

/// Non-interactive stand-in for the argument transcript. `tag` marks real vs
/// simulated proofs; verify accepts both and callers cannot tell which.
struct ProofObject {
  Digest statement_digest{};
  bool accept = false;
  Digest tag{};

  Bytes serialize() const;
  static ProofObject deserialize(BytesView in);
  friend bool operator==(const ProofObject&, const ProofObject&) = default;
};

using RelationCheck = std::function<bool(const Statement&, BytesView witness)>;

/// BadWitness when `relation` rejects (statement, witness).
ProofObject prove(const Statement& statement, BytesView witness, BytesView y, const RelationCheck& relation);
bool verify(const Statement& statement, const ProofObject& proof, BytesView y);
/// Accepting proof without a witness.
ProofObject simulate(const Statement& statement, BytesView y);

}  // namespace rcd::zka
