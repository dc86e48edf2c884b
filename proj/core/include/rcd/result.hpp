// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string_view>
#include <utility>

namespace rcd {

/// Decryption outcome. Bottom and GetUpdate are ordinary values, not faults.
enum class DecStatus { kOk, kBottom, kGetUpdate };

inline std::string_view to_string(DecStatus s) {
  switch (s) {
    case DecStatus::kOk:
      return "ok";
    case DecStatus::kBottom:
      return "bottom";
    case DecStatus::kGetUpdate:
      return "get-update";
  }
  return "unknown";
}

template <typename T>
class DecryptResult {
 public:
  static DecryptResult ok(T value) { return DecryptResult(DecStatus::kOk, std::move(value)); }
  static DecryptResult bottom() { return DecryptResult(DecStatus::kBottom, std::nullopt); }
  static DecryptResult get_update() { return DecryptResult(DecStatus::kGetUpdate, std::nullopt); }

  DecStatus status() const noexcept { return status_; }
  bool is_ok() const noexcept { return status_ == DecStatus::kOk; }
  bool is_bottom() const noexcept { return status_ == DecStatus::kBottom; }
  bool is_get_update() const noexcept { return status_ == DecStatus::kGetUpdate; }
  const T& value() const { return value_.value(); }
  T& value() { return value_.value(); }

  /// Same status with a transformed payload.
  template <typename F>
  auto map(F&& f) const -> DecryptResult<decltype(f(std::declval<const T&>()))> {
    using U = decltype(f(std::declval<const T&>()));
    if (is_ok()) return DecryptResult<U>::ok(f(*value_));
    return is_bottom() ? DecryptResult<U>::bottom() : DecryptResult<U>::get_update();
  }

  friend bool operator==(const DecryptResult&, const DecryptResult&) = default;

 private:
  DecryptResult(DecStatus s, std::optional<T> v) : status_(s), value_(std::move(v)) {}
  DecStatus status_;
  std::optional<T> value_;
};

}  // namespace rcd
