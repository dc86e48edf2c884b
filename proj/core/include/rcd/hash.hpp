// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "rcd/bits.hpp"

namespace rcd {

using Digest = std::array<std::uint8_t, 32>;

/// Incremental SHA-256.
class Hasher {
 public:
  Hasher();
  explicit Hasher(std::string_view domain) : Hasher() { update_str(domain); }

  Hasher& update(BytesView data);
  /// Length-prefixed so concatenations stay unambiguous.
  Hasher& update_str(std::string_view s);
  Hasher& update_u64(std::uint64_t v);
  Hasher& update_bits(const BitString& bits);
  Hasher& update_digest(const Digest& d) { return update(d); }
  Digest finish();

 private:
  // Raw SHA-256 context, kept inline so hashing never allocates.
  alignas(8) std::array<std::uint8_t, 128> state_{};
};

Digest sha256(BytesView data);
Digest hash_domain(std::string_view domain, BytesView data);

/// Counter-mode expansion of SHA-256(domain || seed || counter).
Bytes kdf(std::string_view domain, BytesView seed, std::size_t out_len);

inline Bytes digest_bytes(const Digest& d, std::size_t len = 32) {
  return Bytes(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(len));
}

}  // namespace rcd
