// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rcd/error.hpp"

namespace rcd {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::kLengthMismatch: return "LengthMismatch";
    case Errc::kWidthMismatch: return "WidthMismatch";
    case Errc::kTooLarge: return "TooLarge";
    case Errc::kDomainMismatch: return "DomainMismatch";
    case Errc::kBadWitness: return "BadWitness";
    case Errc::kCircuitTooLarge: return "CircuitTooLarge";
    case Errc::kOneShotConsumed: return "OneShotConsumed";
    case Errc::kKeyReuse: return "KeyReuse";
    case Errc::kParameterError: return "ParameterError";
    case Errc::kPolicyTooDeep: return "PolicyTooDeep";
    case Errc::kMalformedKey: return "MalformedKey";
    case Errc::kStaleView: return "StaleView";
    case Errc::kNotRegistered: return "NotRegistered";
    case Errc::kUnknownKey: return "UnknownKey";
    case Errc::kEmptyDictionary: return "EmptyDictionary";
    case Errc::kSessionOrderViolation: return "SessionOrderViolation";
    case Errc::kAdmissibilityError: return "AdmissibilityError";
    case Errc::kAdversaryProtocolViolation: return "AdversaryProtocolViolation";
    case Errc::kDecodeError: return "DecodeError";
    case Errc::kConfigError: return "ConfigError";
    case Errc::kIoError: return "IOError";
  }
  return "Unknown";
}

}  // namespace rcd
