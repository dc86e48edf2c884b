// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include <nlohmann/json.hpp>

#include "rcd/bits.hpp"

namespace rcd {

/// Classical deletion certificate: a bit string, optionally with a signature.
struct DeletionCert {
  BitString payload;
  std::optional<BitString> signature;

  nlohmann::json to_json() const;
  static DeletionCert from_json(const nlohmann::json& j);
  friend bool operator==(const DeletionCert&, const DeletionCert&) = default;
};

}  // namespace rcd
