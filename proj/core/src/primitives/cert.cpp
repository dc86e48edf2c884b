// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rcd/primitives/cert.hpp"

#include "rcd/error.hpp"

namespace rcd {

nlohmann::json DeletionCert::to_json() const {
  nlohmann::json j = {{"payload_bits", payload.size()}, {"payload", to_hex(payload.to_bytes())}};
  if (signature) {
    j["signature_bits"] = signature->size();
    j["signature"] = to_hex(signature->to_bytes());
  }
  return j;
}

DeletionCert DeletionCert::from_json(const nlohmann::json& j) {
  try {
    DeletionCert c;
    c.payload = BitString::from_bytes(from_hex(j.at("payload").get<std::string>()), j.at("payload_bits").get<std::size_t>());
    if (j.contains("signature"))
      c.signature =
          BitString::from_bytes(from_hex(j.at("signature").get<std::string>()), j.at("signature_bits").get<std::size_t>());
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kDecodeError, std::string("certificate: ") + e.what());
  }
}

}  // namespace rcd
