// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rcd/bits.hpp"
#include "rcd/primitives/cert.hpp"
#include "rcd/primitives/oss.hpp"
#include "rcd/primitives/skecd.hpp"
#include "rcd/qstate.hpp"
#include "rcd/rabe/rabe.hpp"
#include "rcd/result.hpp"
#include "rcd/rng.hpp"
#include "rcd/shad/shad.hpp"

namespace rcd::protocols {

enum class SchemeTag : std::uint8_t { kPriVCD = 0, kPubVCD = 1, kPriVCED = 2, kPubVCED = 3 };

std::string_view to_string(SchemeTag s);
/// Accepts "PriVCD", "privcd", ...; ParameterError otherwise.
SchemeTag scheme_from_string(std::string_view s);
inline bool uses_shad(SchemeTag s) { return s == SchemeTag::kPriVCD || s == SchemeTag::kPubVCD; }
inline bool is_everlasting(SchemeTag s) { return !uses_shad(s); }

/// Ciphertext held by the receiver. Which fields are set depends on `scheme`:
///
///   PriVCD   shad_ct, masked, quantum (one lambda-wire block per bit)
///   PubVCD   shad_ct, receiver_state, oss_crs, oss_pk
///   PriVCED  rabe_cts, quantum (one block per bit)
///   PubVCED  rabe_cts, quantum (lambda + signature wires per bit)
struct HybridCiphertext {
  SchemeTag scheme = SchemeTag::kPriVCD;
  std::size_t lambda = 0;
  std::size_t message_bits = 0;

  std::optional<shad::Ciphertext> shad_ct;
  std::vector<rabe::Ciphertext> rabe_cts;
  BitString masked;
  std::vector<qstate::QReg> quantum;

  std::optional<oss::SecretKey> receiver_state;
  std::optional<oss::Crs> oss_crs;
  std::optional<oss::PublicKey> oss_pk;
  /// Signature on 0, kept once decryption has spent the token.
  std::optional<oss::Signature> sigma0;

  /// Classical components only, in a fixed layout.
  Bytes classical() const;

  /// Quantum parts go through qstate's debug JSON (a simulation artifact).
  nlohmann::json to_json() const;
  static HybridCiphertext from_json(const nlohmann::json& j);
};

struct VerificationKey {
  SchemeTag scheme = SchemeTag::kPriVCD;
  std::optional<skecd::Key> ske_key;      // PriVCD
  std::optional<oss::Crs> oss_crs;        // PubVCD
  std::optional<oss::PublicKey> oss_pk;   // PubVCD
  std::vector<skecd::Block> blocks;       // PriVCED, one (x, theta) per bit
  std::vector<Bytes> sig_vks;             // PubVCED, one per bit

  /// True for PubVCD and PubVCED.
  bool publishable() const noexcept { return scheme == SchemeTag::kPubVCD || scheme == SchemeTag::kPubVCED; }
  nlohmann::json to_json() const;
  static VerificationKey from_json(const nlohmann::json& j);
};

struct Encrypted {
  VerificationKey vk;
  HybridCiphertext ct;
};

// PriVCD

/// Shad message width: the serialized SKE-CD key.
std::size_t privcd_shad_width(std::size_t message_bits, std::size_t lambda);
Encrypted privcd_encrypt(const shad::MasterPublicKey& mpk, const BitString& x, const BitString& mu, Rng& rng,
                         const shad::AuxState& views);
DecryptResult<BitString> privcd_decrypt(const shad::SecretKey& sk, const shad::HelperSecretKey& hsk,
                                        const BitString& x, HybridCiphertext& ct, Rng& rng);
DeletionCert privcd_delete(HybridCiphertext& ct, Rng& rng);
bool privcd_verify(const VerificationKey& vk, const DeletionCert& cert);

// PubVCD

/// Shad message width: the witness-encryption body (nonce, sealed, tag).
std::size_t pubvcd_shad_width(std::size_t message_bits);

enum class SessionMessageKind : std::uint8_t { kOssCrs = 0, kOssPk = 1, kShadCt = 2 };

struct SessionMessage {
  SessionMessageKind kind;
  Bytes body;

  /// Wire framing: u8 kind, u32 length, body.
  Bytes frame() const;
  friend bool operator==(const SessionMessage&, const SessionMessage&) = default;
};

/// Three-message encryption session. Each side enforces its own step order
/// and raises SessionOrderViolation on any call out of turn.
class PubVcdSender {
 public:
  PubVcdSender(shad::MasterPublicKey mpk, BitString x, BitString mu, const shad::AuxState& views);

  /// Message 1: oss.crs.
  SessionMessage open(Rng& rng);
  /// Message 3: Shad encryption of the witness-encrypted message.
  SessionMessage respond(const SessionMessage& pk_message, Rng& rng);
  /// (oss.crs, oss.pk); available once message 3 is out.
  VerificationKey verification_key() const;

 private:
  int step_ = 0;
  shad::MasterPublicKey mpk_;
  BitString x_;
  BitString mu_;
  shad::AuxState views_;
  oss::Crs crs_;
  oss::PublicKey pk_;
};

class PubVcdReceiver {
 public:
  PubVcdReceiver(std::size_t lambda, std::size_t message_bits) : lambda_(lambda), message_bits_(message_bits) {}

  /// Message 2: oss.pk; keeps oss.sk.
  SessionMessage accept(const SessionMessage& crs_message, Rng& rng);
  /// Consumes message 3 and returns (srabe.ct, oss.sk).
  HybridCiphertext finish(const SessionMessage& ct_message);

 private:
  int step_ = 0;
  std::size_t lambda_;
  std::size_t message_bits_;
  oss::Crs crs_;
  oss::PublicKey pk_;
  oss::SecretKey sk_;
};

struct SessionResult {
  VerificationKey vk;
  HybridCiphertext ct;
  std::vector<SessionMessage> transcript;
};

/// Runs both sides in process.
SessionResult pubvcd_encrypt_session(const shad::MasterPublicKey& mpk, const BitString& x, const BitString& mu,
                                     Rng& rng, const shad::AuxState& views, std::size_t lambda);
/// Signs 0 with the receiver's token, then decrypts. A spent-on-1 token is
/// bottom; a token already spent on 0 reuses the kept signature.
DecryptResult<BitString> pubvcd_decrypt(const shad::SecretKey& sk, const shad::HelperSecretKey& hsk,
                                        const BitString& x, HybridCiphertext& ct);
/// Signs 1. OneShotConsumed if the token is spent.
DeletionCert pubvcd_delete(HybridCiphertext& ct);
bool pubvcd_verify(const VerificationKey& vk, const DeletionCert& cert);

// PriVCED

/// Masked bit b xor (xor of x_i over theta_i = 0).
bool privced_mask(const skecd::Block& block, bool b);
Encrypted privced_encrypt(const rabe::MasterPublicKey& mpk, const BitString& x, bool b, Rng& rng,
                          const rabe::AuxState& view, std::size_t lambda);
/// One independent (x, theta) block per bit.
Encrypted privced_encrypt_many(const rabe::MasterPublicKey& mpk, const BitString& x, const BitString& mu, Rng& rng,
                               const rabe::AuxState& view, std::size_t lambda);
DecryptResult<BitString> privced_decrypt(const rabe::Crs& crs, const rabe::SecretKey& sk,
                                         const rabe::HelperSecretKey& hsk, const BitString& x, HybridCiphertext& ct,
                                         Rng& rng);
DeletionCert privced_delete(HybridCiphertext& ct, Rng& rng);
bool privced_verify(const VerificationKey& vk, const DeletionCert& cert);

// PubVCED

inline constexpr char kSignMapKind[] = "lamport-sign";

/// |v>|s> -> |v>|s xor Sign(sigk, v)> over lambda message wires.
qstate::XorMap sign_map(const Bytes& sigk);
/// Rebuilds sign maps from serialized registers.
qstate::MapResolver map_resolver();

Encrypted pubvced_encrypt(const rabe::MasterPublicKey& mpk, const BitString& x, bool b, Rng& rng,
                          const rabe::AuxState& view, std::size_t lambda);
Encrypted pubvced_encrypt_many(const rabe::MasterPublicKey& mpk, const BitString& x, const BitString& mu, Rng& rng,
                               const rabe::AuxState& view, std::size_t lambda);
/// Uncomputes the signature, measures only the theta_i = 1 wires in the
/// Hadamard basis, then recomputes, so an intact ciphertext is left as it was.
DecryptResult<BitString> pubvced_decrypt(const rabe::Crs& crs, const rabe::SecretKey& sk,
                                         const rabe::HelperSecretKey& hsk, const BitString& x, HybridCiphertext& ct,
                                         Rng& rng);
/// Computational measurement; payload holds x', signature holds sigma'.
DeletionCert pubvced_delete(HybridCiphertext& ct, Rng& rng);
bool pubvced_verify(const VerificationKey& vk, const DeletionCert& cert);

}  // namespace rcd::protocols
