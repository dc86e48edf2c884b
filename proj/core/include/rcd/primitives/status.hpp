// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string_view>

namespace rcd::primitives {

/// Every primitive in this library is a functional reference: it satisfies
/// its correctness contract and nothing more.
enum class SecurityStatus {
  kFunctionalReferenceOnly,
};

struct PrimitiveStatus {
  std::string_view name;
  SecurityStatus status;
  std::string_view note;
};

std::span<const PrimitiveStatus> security_status();
std::string_view to_string(SecurityStatus s);

}  // namespace rcd::primitives
