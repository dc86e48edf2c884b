// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rcd/primitives/io.hpp"

#include "rcd/codec.hpp"

namespace rcd::io {

Bytes IdentityCircuit::serialize() const {
  return ByteWriter().str("identity").u32(static_cast<std::uint32_t>(width)).take();
}

BitString IdentityCircuit::evaluate(const BitString& in) const {
  if (in.size() != width) throw Error(Errc::kLengthMismatch, "identity circuit input width");
  return in;
}

Bytes XorMaskCircuit::serialize() const { return ByteWriter().str("xor-mask").bits(mask).take(); }

}  // namespace rcd::io
