// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rcd/codec.hpp"

#include "rcd/error.hpp"

namespace rcd {

ByteWriter& ByteWriter::u32(std::uint32_t v) {
  std::uint8_t buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<std::uint8_t>(v >> (8 * i));
  return raw(buf);
}

ByteWriter& ByteWriter::u64(std::uint64_t v) {
  std::uint8_t buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<std::uint8_t>(v >> (8 * i));
  return raw(buf);
}

ByteWriter& ByteWriter::bytes(BytesView v) {
  u32(static_cast<std::uint32_t>(v.size()));
  return raw(v);
}

ByteWriter& ByteWriter::raw(BytesView v) {
  out_.insert(out_.end(), v.begin(), v.end());
  return *this;
}

ByteWriter& ByteWriter::bits(const BitString& b) {
  u32(static_cast<std::uint32_t>(b.size()));
  return raw(b.to_bytes());
}

void ByteReader::need(std::size_t n) const {
  if (in_.size() - pos_ < n) throw Error(Errc::kDecodeError, "truncated encoding");
}

std::uint8_t ByteReader::u8() {
  need(1);
  return in_[pos_++];
}

std::uint32_t ByteReader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in_[pos_++]) << (8 * i);
  return v;
}

std::uint64_t ByteReader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in_[pos_++]) << (8 * i);
  return v;
}

Bytes ByteReader::raw(std::size_t n) {
  need(n);
  Bytes out(in_.begin() + static_cast<std::ptrdiff_t>(pos_),
            in_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
  pos_ += n;
  return out;
}

Bytes ByteReader::bytes() { return raw(u32()); }

std::string ByteReader::str() {
  auto b = bytes();
  return std::string(b.begin(), b.end());
}

BitString ByteReader::bits() {
  std::size_t n = u32();
  auto payload = raw((n + 7) / 8);
  return BitString::from_bytes(payload, n);
}

Digest ByteReader::digest() {
  need(32);
  Digest d{};
  for (auto& b : d) b = in_[pos_++];
  return d;
}

void ByteReader::expect_done() const {
  if (!done()) throw Error(Errc::kDecodeError, "trailing bytes after encoding");
}

}  // namespace rcd
