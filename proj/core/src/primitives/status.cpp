// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rcd/primitives/status.hpp"

#include <array>

namespace rcd::primitives {

namespace {

constexpr std::array<PrimitiveStatus, 7> kStatus{{
    {"pke", SecurityStatus::kFunctionalReferenceOnly,
     "hash-KDF stream with integrity tag; the public key determines the decryption keystream"},
    {"sig", SecurityStatus::kFunctionalReferenceOnly, "Lamport one-time signature over SHA-256; deterministic"},
    {"zka", SecurityStatus::kFunctionalReferenceOnly,
     "proof object bound to a statement digest; simulate skips the witness check"},
    {"io", SecurityStatus::kFunctionalReferenceOnly, "transparent wrapper, no hiding"},
    {"we", SecurityStatus::kFunctionalReferenceOnly, "relation check then unseal by a trusted in-process evaluator"},
    {"oss", SecurityStatus::kFunctionalReferenceOnly, "consumable token; no-cloning modelled by shared single-transition state"},
    {"skecd", SecurityStatus::kFunctionalReferenceOnly,
     "noiseless BB84 one-time pad; certified deletion holds at the simulation level"},
}};

}  // namespace

std::span<const PrimitiveStatus> security_status() { return kStatus; }

std::string_view to_string(SecurityStatus s) {
  switch (s) {
    case SecurityStatus::kFunctionalReferenceOnly:
      return "functional-reference-only";
  }
  return "unknown";
}

}  // namespace rcd::primitives
