// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rcd/bits.hpp"

#include <algorithm>

#include "rcd/error.hpp"

namespace rcd {

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

std::string to_hex(BytesView data) {
  std::string out;
  out.reserve(data.size() * 2);
  for (auto b : data) {
    out.push_back(kHexDigits[b >> 4]);
    out.push_back(kHexDigits[b & 0xf]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw Error(Errc::kDecodeError, "odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = hex_value(hex[2 * i]);
    int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw Error(Errc::kDecodeError, "invalid hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

BitString::BitString(std::initializer_list<int> bits) {
  bits_.reserve(bits.size());
  for (int b : bits) bits_.push_back(b ? 1 : 0);
}

BitString BitString::from_string(std::string_view s) {
  BitString out;
  out.bits_.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw Error(Errc::kDecodeError, "bit string must contain only 0/1");
    out.bits_.push_back(c == '1' ? 1 : 0);
  }
  return out;
}

BitString BitString::from_bytes(BytesView bytes, std::size_t nbits) {
  if (nbits > bytes.size() * 8) throw Error(Errc::kLengthMismatch, "not enough bytes for bit count");
  BitString out(nbits);
  for (std::size_t i = 0; i < nbits; ++i) out.bits_[i] = (bytes[i / 8] >> (7 - i % 8)) & 1;
  return out;
}

BitString BitString::from_uint(std::uint64_t value, std::size_t nbits) {
  BitString out(nbits);
  for (std::size_t i = 0; i < nbits && i < 64; ++i) out.bits_[i] = (value >> i) & 1;
  return out;
}

std::size_t BitString::popcount() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BitString BitString::slice(std::size_t offset, std::size_t len) const {
  if (offset + len > bits_.size()) throw Error(Errc::kLengthMismatch, "slice out of range");
  BitString out;
  out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(offset),
                   bits_.begin() + static_cast<std::ptrdiff_t>(offset + len));
  return out;
}

BitString& BitString::append(const BitString& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
  return *this;
}

BitString& BitString::operator^=(const BitString& other) {
  if (other.size() != size()) throw Error(Errc::kLengthMismatch, "xor of unequal lengths");
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] ^= other.bits_[i];
  return *this;
}

std::uint64_t BitString::to_uint() const {
  if (bits_.size() > 64) throw Error(Errc::kTooLarge, "bit string wider than 64 bits");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i) v |= static_cast<std::uint64_t>(bits_[i]) << i;
  return v;
}

Bytes BitString::to_bytes() const {
  Bytes out((bits_.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80 >> (i % 8));
  return out;
}

std::string BitString::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) s[i] = '1';
  return s;
}

BitString concat(const BitString& a, const BitString& b) {
  BitString out = a;
  out.append(b);
  return out;
}

std::size_t BitStringHash::operator()(const BitString& b) const noexcept {
  std::size_t h = 1469598103934665603ULL ^ b.size();
  for (auto v : b.raw()) h = (h ^ v) * 1099511628211ULL;
  return h;
}

}  // namespace rcd
