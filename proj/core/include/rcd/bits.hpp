// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rcd {

using Bytes = std::vector<std::uint8_t>;
using BytesView = std::span<const std::uint8_t>;

std::string to_hex(BytesView data);
Bytes from_hex(std::string_view hex);

inline BytesView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

/// Ordered sequence of bits, one element per bit.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t n, bool value = false) : bits_(n, value ? 1 : 0) {}
  BitString(std::initializer_list<int> bits);

  /// Parses "0101"; any other character is a DecodeError.
  static BitString from_string(std::string_view s);
  /// MSB-first unpacking of the first `nbits` bits of `bytes`.
  static BitString from_bytes(BytesView bytes, std::size_t nbits);
  /// Little-endian: bit i of the result is bit i of `value`.
  static BitString from_uint(std::uint64_t value, std::size_t nbits);

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }

  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  bool at(std::size_t i) const { return bits_.at(i) != 0; }
  void set(std::size_t i, bool v) { bits_.at(i) = v ? 1 : 0; }
  void flip(std::size_t i) { bits_.at(i) ^= 1; }
  void push_back(bool v) { bits_.push_back(v ? 1 : 0); }

  std::size_t popcount() const noexcept;
  bool all_zero() const noexcept { return popcount() == 0; }

  BitString slice(std::size_t offset, std::size_t len) const;
  BitString& append(const BitString& other);
  BitString& operator^=(const BitString& other);
  friend BitString operator^(BitString a, const BitString& b) { return a ^= b; }

  std::uint64_t to_uint() const;
  Bytes to_bytes() const;
  std::string to_string() const;

  friend bool operator==(const BitString&, const BitString&) = default;
  friend auto operator<=>(const BitString&, const BitString&) = default;

  const std::vector<std::uint8_t>& raw() const noexcept { return bits_; }

 private:
  std::vector<std::uint8_t> bits_;
};

BitString concat(const BitString& a, const BitString& b);

/// Per-wire measurement/preparation bases: bit 0 is the computational basis,
/// bit 1 the Hadamard basis.
class BasisString {
 public:
  BasisString() = default;
  explicit BasisString(BitString bits) : bits_(std::move(bits)) {}
  static BasisString computational(std::size_t n) { return BasisString(BitString(n, false)); }
  static BasisString hadamard(std::size_t n) { return BasisString(BitString(n, true)); }
  static BasisString from_string(std::string_view s) { return BasisString(BitString::from_string(s)); }

  std::size_t size() const noexcept { return bits_.size(); }
  bool is_hadamard(std::size_t i) const { return bits_[i]; }
  std::size_t hadamard_count() const noexcept { return bits_.popcount(); }
  const BitString& bits() const noexcept { return bits_; }
  std::string to_string() const { return bits_.to_string(); }

  friend bool operator==(const BasisString&, const BasisString&) = default;

 private:
  BitString bits_;
};

struct BitStringHash {
  std::size_t operator()(const BitString& b) const noexcept;
};

}  // namespace rcd
