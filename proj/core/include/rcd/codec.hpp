// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "rcd/bits.hpp"
#include "rcd/hash.hpp"

namespace rcd {

/// Canonical byte encoding: little-endian fixed-width counts, length-prefixed
/// variable fields.
class ByteWriter {
 public:
  ByteWriter& u8(std::uint8_t v) {
    out_.push_back(v);
    return *this;
  }
  ByteWriter& u32(std::uint32_t v);
  ByteWriter& u64(std::uint64_t v);
  ByteWriter& bytes(BytesView v);  // u32 length, then payload
  ByteWriter& raw(BytesView v);    // payload only
  ByteWriter& str(std::string_view s) { return bytes(as_bytes(s)); }
  ByteWriter& bits(const BitString& b);  // u32 bit count, packed payload
  ByteWriter& digest(const Digest& d) { return raw(d); }

  const Bytes& data() const& noexcept { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class ByteReader {
 public:
  explicit ByteReader(BytesView in) : in_(in) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  Bytes bytes();
  Bytes raw(std::size_t n);
  std::string str();
  BitString bits();
  Digest digest();

  bool done() const noexcept { return pos_ == in_.size(); }
  /// DecodeError unless every byte was consumed.
  void expect_done() const;

 private:
  void need(std::size_t n) const;
  BytesView in_;
  std::size_t pos_ = 0;
};

}  // namespace rcd
