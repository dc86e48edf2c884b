// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rcd {

/// Failure categories raised as exceptions. Protocol-level failures that the
/// constructions model as outputs (bottom, GetUpdate) are returned as values
/// and never appear here.
enum class Errc {
  kLengthMismatch,
  kWidthMismatch,
  kTooLarge,
  kDomainMismatch,
  kBadWitness,
  kCircuitTooLarge,
  kOneShotConsumed,
  kKeyReuse,
  kParameterError,
  kPolicyTooDeep,
  kMalformedKey,
  kStaleView,
  kNotRegistered,
  kUnknownKey,
  kEmptyDictionary,
  kSessionOrderViolation,
  kAdmissibilityError,
  kAdversaryProtocolViolation,
  kDecodeError,
  kConfigError,
  kIoError,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace rcd
