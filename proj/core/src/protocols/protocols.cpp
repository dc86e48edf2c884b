// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rcd/protocols/protocols.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <utility>

#include "rcd/codec.hpp"
#include "rcd/error.hpp"
#include "rcd/hash.hpp"
#include "rcd/primitives/sig.hpp"
#include "rcd/primitives/we.hpp"

namespace rcd::protocols {
namespace {

using nlohmann::json;

BitString parity_source(const BitString& x, const BasisString& theta, bool hadamard_positions) {
  BitString out;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (theta.is_hadamard(i) == hadamard_positions) out.push_back(x[i]);
  return out;
}

bool parity(const BitString& b) { return (b.popcount() & 1U) != 0; }

std::vector<std::size_t> iota_wires(std::size_t from, std::size_t count) {
  std::vector<std::size_t> w(count);
  std::iota(w.begin(), w.end(), from);
  return w;
}

void require_scheme(const HybridCiphertext& ct, SchemeTag s) {
  if (ct.scheme != s)
    throw Error(Errc::kParameterError,
                "ciphertext is " + std::string(to_string(ct.scheme)) + ", expected " + std::string(to_string(s)));
}

void require_scheme(const VerificationKey& vk, SchemeTag s) {
  if (vk.scheme != s)
    throw Error(Errc::kParameterError, "verification key is " + std::string(to_string(vk.scheme)) + ", expected " +
                                           std::string(to_string(s)));
}

/// Combines per-block RABE outcomes: GetUpdate wins, then bottom.
template <typename F>
std::optional<DecStatus> combine(std::size_t n, F&& status_of) {
  bool bottom = false;
  for (std::size_t j = 0; j < n; ++j) {
    auto s = status_of(j);
    if (s == DecStatus::kGetUpdate) return DecStatus::kGetUpdate;
    if (s == DecStatus::kBottom) bottom = true;
  }
  if (bottom) return DecStatus::kBottom;
  return std::nullopt;
}

DecryptResult<BitString> from_status(DecStatus s) {
  return s == DecStatus::kGetUpdate ? DecryptResult<BitString>::get_update() : DecryptResult<BitString>::bottom();
}

// PriVCED plaintext: theta || masked bit.
Bytes encode_privced(const BasisString& theta, bool masked) {
  BitString b = theta.bits();
  b.push_back(masked);
  return b.to_bytes();
}

std::optional<std::pair<BasisString, bool>> decode_privced(const Bytes& m, std::size_t lambda) {
  if (m.size() != (lambda + 1 + 7) / 8) return std::nullopt;
  auto bits = BitString::from_bytes(m, lambda + 1);
  return std::make_pair(BasisString(bits.slice(0, lambda)), bits[lambda]);
}

// PubVCED plaintext: sigk, theta, masked bit.
Bytes encode_pubvced(const Bytes& sigk, const BasisString& theta, bool masked) {
  return ByteWriter().bytes(sigk).bits(theta.bits()).u8(masked ? 1 : 0).take();
}

struct PubvcedPlain {
  Bytes sigk;
  BasisString theta;
  bool masked;
};

std::optional<PubvcedPlain> decode_pubvced(const Bytes& m, std::size_t lambda) {
  try {
    ByteReader r(m);
    PubvcedPlain p;
    p.sigk = r.bytes();
    p.theta = BasisString(r.bits());
    auto flag = r.u8();
    r.expect_done();
    if (p.theta.size() != lambda || flag > 1 || sig::message_bits(p.sigk) != lambda) return std::nullopt;
    p.masked = flag == 1;
    return p;
  } catch (const Error&) {
    return std::nullopt;
  }
}

json bytes_json(const Bytes& b) { return to_hex(b); }
Bytes json_bytes(const json& j) { return from_hex(j.get<std::string>()); }

json quantum_json(const std::vector<qstate::QReg>& regs) {
  json arr = json::array();
  for (const auto& r : regs) arr.push_back(r.to_json());
  return {{"simulation_artifact", true}, {"registers", arr}};
}

std::vector<qstate::QReg> quantum_from_json(const json& j) {
  std::vector<qstate::QReg> out;
  for (const auto& r : j.at("registers")) out.push_back(qstate::QReg::from_json(r, map_resolver()));
  return out;
}

}  // namespace

std::string_view to_string(SchemeTag s) {
  switch (s) {
    case SchemeTag::kPriVCD:
      return "PriVCD";
    case SchemeTag::kPubVCD:
      return "PubVCD";
    case SchemeTag::kPriVCED:
      return "PriVCED";
    case SchemeTag::kPubVCED:
      return "PubVCED";
  }
  return "unknown";
}

SchemeTag scheme_from_string(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "privcd") return SchemeTag::kPriVCD;
  if (lower == "pubvcd") return SchemeTag::kPubVCD;
  if (lower == "privced") return SchemeTag::kPriVCED;
  if (lower == "pubvced") return SchemeTag::kPubVCED;
  throw Error(Errc::kParameterError, "unknown scheme '" + std::string(s) + "'");
}

Bytes HybridCiphertext::classical() const {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(scheme)).u32(static_cast<std::uint32_t>(lambda));
  w.u32(static_cast<std::uint32_t>(message_bits));
  w.bytes(shad_ct ? shad_ct->serialize() : Bytes{});
  w.u32(static_cast<std::uint32_t>(rabe_cts.size()));
  for (const auto& c : rabe_cts) w.bytes(c.serialize());
  w.bits(masked);
  w.bytes(oss_crs ? oss_crs->value : Bytes{}).bytes(oss_pk ? oss_pk->value : Bytes{});
  return w.take();
}

json HybridCiphertext::to_json() const {
  json j;
  j["scheme"] = std::string(to_string(scheme));
  j["lambda"] = lambda;
  j["message_bits"] = message_bits;
  json c = json::object();
  if (shad_ct) c["shad_ct"] = bytes_json(shad_ct->serialize());
  if (!rabe_cts.empty()) {
    json arr = json::array();
    for (const auto& r : rabe_cts) arr.push_back(bytes_json(r.serialize()));
    c["rabe_cts"] = arr;
  }
  if (scheme == SchemeTag::kPriVCD) c["masked"] = masked.to_string();
  if (oss_crs) c["oss_crs"] = bytes_json(oss_crs->value);
  if (oss_pk) c["oss_pk"] = bytes_json(oss_pk->value);
  if (sigma0) c["sigma0"] = bytes_json(sigma0->value);
  j["classical"] = c;
  j["quantum"] = quantum_json(quantum);
  if (receiver_state) j["receiver_state"] = bytes_json(receiver_state->serialize());
  return j;
}

HybridCiphertext HybridCiphertext::from_json(const json& j) {
  try {
    HybridCiphertext ct;
    ct.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    ct.lambda = j.at("lambda").get<std::size_t>();
    ct.message_bits = j.at("message_bits").get<std::size_t>();
    const auto& c = j.at("classical");
    if (c.contains("shad_ct")) ct.shad_ct = shad::Ciphertext::deserialize(json_bytes(c["shad_ct"]));
    if (c.contains("rabe_cts"))
      for (const auto& r : c["rabe_cts"]) ct.rabe_cts.push_back(rabe::Ciphertext::deserialize(json_bytes(r)));
    if (c.contains("masked")) ct.masked = BitString::from_string(c["masked"].get<std::string>());
    if (c.contains("oss_crs")) ct.oss_crs = oss::Crs{json_bytes(c["oss_crs"])};
    if (c.contains("oss_pk")) ct.oss_pk = oss::PublicKey{json_bytes(c["oss_pk"])};
    if (c.contains("sigma0")) ct.sigma0 = oss::Signature{json_bytes(c["sigma0"])};
    ct.quantum = quantum_from_json(j.at("quantum"));
    if (j.contains("receiver_state")) ct.receiver_state = oss::SecretKey::deserialize(json_bytes(j["receiver_state"]));
    return ct;
  } catch (const json::exception& e) {
    throw Error(Errc::kDecodeError, std::string("ciphertext JSON: ") + e.what());
  }
}

json VerificationKey::to_json() const {
  json j;
  j["scheme"] = std::string(to_string(scheme));
  if (ske_key) j["ske_key"] = {{"lambda", ske_key->lambda()}, {"message_bits", ske_key->message_bits()},
                               {"bits", ske_key->to_bits().to_string()}};
  if (oss_crs) j["oss_crs"] = bytes_json(oss_crs->value);
  if (oss_pk) j["oss_pk"] = bytes_json(oss_pk->value);
  if (!blocks.empty()) {
    json arr = json::array();
    for (const auto& b : blocks) arr.push_back({{"x", b.x.to_string()}, {"theta", b.theta.to_string()}});
    j["blocks"] = arr;
  }
  if (!sig_vks.empty()) {
    json arr = json::array();
    for (const auto& v : sig_vks) arr.push_back(bytes_json(v));
    j["sig_vks"] = arr;
  }
  return j;
}

VerificationKey VerificationKey::from_json(const json& j) {
  try {
    VerificationKey vk;
    vk.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    if (j.contains("ske_key")) {
      const auto& k = j["ske_key"];
      vk.ske_key = skecd::Key::from_bits(BitString::from_string(k.at("bits").get<std::string>()),
                                         k.at("message_bits").get<std::size_t>(), k.at("lambda").get<std::size_t>());
    }
    if (j.contains("oss_crs")) vk.oss_crs = oss::Crs{json_bytes(j["oss_crs"])};
    if (j.contains("oss_pk")) vk.oss_pk = oss::PublicKey{json_bytes(j["oss_pk"])};
    if (j.contains("blocks"))
      for (const auto& b : j["blocks"])
        vk.blocks.push_back({BitString::from_string(b.at("x").get<std::string>()),
                             BasisString::from_string(b.at("theta").get<std::string>())});
    if (j.contains("sig_vks"))
      for (const auto& v : j["sig_vks"]) vk.sig_vks.push_back(json_bytes(v));
    return vk;
  } catch (const json::exception& e) {
    throw Error(Errc::kDecodeError, std::string("verification key JSON: ") + e.what());
  }
}

// PriVCD

std::size_t privcd_shad_width(std::size_t message_bits, std::size_t lambda) {
  return skecd::Key::bit_width(message_bits, lambda);
}

Encrypted privcd_encrypt(const shad::MasterPublicKey& mpk, const BitString& x, const BitString& mu, Rng& rng,
                         const shad::AuxState& views) {
  if (mu.empty()) throw Error(Errc::kLengthMismatch, "empty message");
  std::size_t width = mpk.grid.rows();
  if (width % (2 * mu.size()) != 0 || width == 0)
    throw Error(Errc::kLengthMismatch, "message length " + std::to_string(mu.size()) +
                                           " does not fit Shad width " + std::to_string(width));
  std::size_t lambda = width / (2 * mu.size());

  auto key = skecd::keygen(mu.size(), lambda, rng);
  auto shad_ct = shad::encrypt(mpk, x, key.to_bits(), rng, views);
  auto ske_ct = skecd::encrypt(key, mu);

  Encrypted out;
  out.vk.scheme = SchemeTag::kPriVCD;
  out.vk.ske_key = key;
  out.ct.scheme = SchemeTag::kPriVCD;
  out.ct.lambda = lambda;
  out.ct.message_bits = mu.size();
  out.ct.shad_ct = std::move(shad_ct);
  out.ct.masked = std::move(ske_ct.classical);
  out.ct.quantum = std::move(ske_ct.quantum);
  return out;
}

DecryptResult<BitString> privcd_decrypt(const shad::SecretKey& sk, const shad::HelperSecretKey& hsk,
                                        const BitString& x, HybridCiphertext& ct, Rng& rng) {
  require_scheme(ct, SchemeTag::kPriVCD);
  if (!ct.shad_ct) return DecryptResult<BitString>::bottom();
  auto inner = shad::decrypt(sk, hsk, x, *ct.shad_ct);
  if (!inner.is_ok()) return from_status(inner.status());
  if (inner.value().size() != privcd_shad_width(ct.message_bits, ct.lambda)) return DecryptResult<BitString>::bottom();
  auto key = skecd::Key::from_bits(inner.value(), ct.message_bits, ct.lambda);
  skecd::Ciphertext ske{ct.quantum, ct.masked};
  auto mu = skecd::decrypt(key, ske, rng);
  if (!mu) return DecryptResult<BitString>::bottom();
  return DecryptResult<BitString>::ok(*mu);
}

DeletionCert privcd_delete(HybridCiphertext& ct, Rng& rng) {
  require_scheme(ct, SchemeTag::kPriVCD);
  skecd::Ciphertext ske{std::move(ct.quantum), ct.masked};
  auto cert = skecd::delete_ciphertext(ske, rng);
  ct.quantum = std::move(ske.quantum);
  return cert;
}

bool privcd_verify(const VerificationKey& vk, const DeletionCert& cert) {
  require_scheme(vk, SchemeTag::kPriVCD);
  if (!vk.ske_key) return false;
  return skecd::verify(*vk.ske_key, cert);
}

// PubVCD

std::size_t pubvcd_shad_width(std::size_t message_bits) {
  return 8 * (we::kNonceBytes + (message_bits + 7) / 8 + we::kTagBytes);
}

Bytes SessionMessage::frame() const {
  return ByteWriter().u8(static_cast<std::uint8_t>(kind)).bytes(body).take();
}

PubVcdSender::PubVcdSender(shad::MasterPublicKey mpk, BitString x, BitString mu, const shad::AuxState& views)
    : mpk_(std::move(mpk)), x_(std::move(x)), mu_(std::move(mu)), views_(views) {
  if (mpk_.grid.rows() != pubvcd_shad_width(mu_.size()))
    throw Error(Errc::kLengthMismatch, "message of " + std::to_string(mu_.size()) +
                                           " bits does not fit Shad width " + std::to_string(mpk_.grid.rows()));
}

SessionMessage PubVcdSender::open(Rng& rng) {
  if (step_ != 0) throw Error(Errc::kSessionOrderViolation, "sender already sent oss.crs");
  crs_ = oss::setup(rng);
  step_ = 1;
  return {SessionMessageKind::kOssCrs, crs_.value};
}

SessionMessage PubVcdSender::respond(const SessionMessage& pk_message, Rng& rng) {
  if (step_ != 1) throw Error(Errc::kSessionOrderViolation, "sender expects oss.pk only after sending oss.crs");
  if (pk_message.kind != SessionMessageKind::kOssPk)
    throw Error(Errc::kSessionOrderViolation, "second message must be oss.pk");
  pk_ = oss::PublicKey{pk_message.body};
  auto we_ct = we::encrypt(we::oss_signed_zero(crs_, pk_), mu_.to_bytes(), rng);
  Bytes body = we_ct.nonce;
  body.insert(body.end(), we_ct.sealed.begin(), we_ct.sealed.end());
  body.insert(body.end(), we_ct.tag.begin(), we_ct.tag.end());
  auto ct = shad::encrypt(mpk_, x_, BitString::from_bytes(body, 8 * body.size()), rng, views_);
  step_ = 2;
  return {SessionMessageKind::kShadCt, ct.serialize()};
}

VerificationKey PubVcdSender::verification_key() const {
  if (step_ != 2) throw Error(Errc::kSessionOrderViolation, "session not complete");
  VerificationKey vk;
  vk.scheme = SchemeTag::kPubVCD;
  vk.oss_crs = crs_;
  vk.oss_pk = pk_;
  return vk;
}

SessionMessage PubVcdReceiver::accept(const SessionMessage& crs_message, Rng& rng) {
  if (step_ != 0) throw Error(Errc::kSessionOrderViolation, "receiver already answered oss.crs");
  if (crs_message.kind != SessionMessageKind::kOssCrs)
    throw Error(Errc::kSessionOrderViolation, "first message must be oss.crs");
  crs_ = oss::Crs{crs_message.body};
  auto kp = oss::keygen(crs_, rng);
  pk_ = kp.pk;
  sk_ = kp.sk;
  step_ = 1;
  return {SessionMessageKind::kOssPk, pk_.value};
}

HybridCiphertext PubVcdReceiver::finish(const SessionMessage& ct_message) {
  if (step_ != 1) throw Error(Errc::kSessionOrderViolation, "receiver expects srabe.ct only after sending oss.pk");
  if (ct_message.kind != SessionMessageKind::kShadCt)
    throw Error(Errc::kSessionOrderViolation, "third message must be srabe.ct");
  HybridCiphertext ct;
  ct.scheme = SchemeTag::kPubVCD;
  ct.lambda = lambda_;
  ct.message_bits = message_bits_;
  ct.shad_ct = shad::Ciphertext::deserialize(ct_message.body);
  ct.receiver_state = sk_;
  ct.oss_crs = crs_;
  ct.oss_pk = pk_;
  step_ = 2;
  return ct;
}

SessionResult pubvcd_encrypt_session(const shad::MasterPublicKey& mpk, const BitString& x, const BitString& mu,
                                     Rng& rng, const shad::AuxState& views, std::size_t lambda) {
  PubVcdSender sender(mpk, x, mu, views);
  PubVcdReceiver receiver(lambda, mu.size());
  SessionResult out;
  out.transcript.push_back(sender.open(rng));
  out.transcript.push_back(receiver.accept(out.transcript[0], rng));
  out.transcript.push_back(sender.respond(out.transcript[1], rng));
  out.ct = receiver.finish(out.transcript[2]);
  out.vk = sender.verification_key();
  return out;
}

DecryptResult<BitString> pubvcd_decrypt(const shad::SecretKey& sk, const shad::HelperSecretKey& hsk,
                                        const BitString& x, HybridCiphertext& ct) {
  require_scheme(ct, SchemeTag::kPubVCD);
  if (!ct.shad_ct || !ct.receiver_state || !ct.oss_crs || !ct.oss_pk) return DecryptResult<BitString>::bottom();

  oss::Signature sigma;
  try {
    sigma = ct.receiver_state->sign(false);
    ct.sigma0 = sigma;
  } catch (const Error& e) {
    if (e.code() != Errc::kOneShotConsumed) throw;
    // Spent on 0 earlier: the receiver still holds that signature.
    if (ct.receiver_state->signed_message() != std::optional<bool>(false) || !ct.sigma0)
      return DecryptResult<BitString>::bottom();
    sigma = *ct.sigma0;
  }

  auto inner = shad::decrypt(sk, hsk, x, *ct.shad_ct);
  if (!inner.is_ok()) return from_status(inner.status());
  const auto& body_bits = inner.value();
  if (body_bits.size() != pubvcd_shad_width(ct.message_bits)) return DecryptResult<BitString>::bottom();
  Bytes body = body_bits.to_bytes();
  we::Ciphertext we_ct;
  we_ct.statement = we::oss_signed_zero(*ct.oss_crs, *ct.oss_pk);
  auto nonce_end = body.begin() + static_cast<std::ptrdiff_t>(we::kNonceBytes);
  auto tag_begin = body.end() - static_cast<std::ptrdiff_t>(we::kTagBytes);
  we_ct.nonce.assign(body.begin(), nonce_end);
  we_ct.sealed.assign(nonce_end, tag_begin);
  we_ct.tag.assign(tag_begin, body.end());
  auto m = we::decrypt(we_ct, sigma.value);
  if (!m) return DecryptResult<BitString>::bottom();
  return DecryptResult<BitString>::ok(BitString::from_bytes(*m, ct.message_bits));
}

DeletionCert pubvcd_delete(HybridCiphertext& ct) {
  require_scheme(ct, SchemeTag::kPubVCD);
  if (!ct.receiver_state) throw Error(Errc::kMalformedKey, "ciphertext carries no one-shot token");
  auto sigma = ct.receiver_state->sign(true);
  return DeletionCert{BitString::from_bytes(sigma.value, 8 * sigma.value.size()), std::nullopt};
}

bool pubvcd_verify(const VerificationKey& vk, const DeletionCert& cert) {
  require_scheme(vk, SchemeTag::kPubVCD);
  if (!vk.oss_crs || !vk.oss_pk) return false;
  if (cert.payload.size() != 8 * oss::kSignatureBytes || cert.signature) return false;
  return oss::verify(*vk.oss_crs, *vk.oss_pk, oss::Signature{cert.payload.to_bytes()}, true);
}

// PriVCED

bool privced_mask(const skecd::Block& block, bool b) { return b ^ parity(parity_source(block.x, block.theta, false)); }

Encrypted privced_encrypt(const rabe::MasterPublicKey& mpk, const BitString& x, bool b, Rng& rng,
                          const rabe::AuxState& view, std::size_t lambda) {
  return privced_encrypt_many(mpk, x, BitString(1, b), rng, view, lambda);
}

Encrypted privced_encrypt_many(const rabe::MasterPublicKey& mpk, const BitString& x, const BitString& mu, Rng& rng,
                               const rabe::AuxState& view, std::size_t lambda) {
  if (mu.empty()) throw Error(Errc::kLengthMismatch, "empty message");
  if (lambda == 0) throw Error(Errc::kParameterError, "lambda must be positive");
  Encrypted out;
  out.vk.scheme = SchemeTag::kPriVCED;
  out.ct.scheme = SchemeTag::kPriVCED;
  out.ct.lambda = lambda;
  out.ct.message_bits = mu.size();
  for (std::size_t j = 0; j < mu.size(); ++j) {
    skecd::Block block{rng.bits(lambda), BasisString(rng.bits(lambda))};
    out.ct.rabe_cts.push_back(rabe::encrypt(mpk, x, encode_privced(block.theta, privced_mask(block, mu[j])), rng, view));
    out.ct.quantum.push_back(qstate::bb84_prepare(block.x, block.theta));
    out.vk.blocks.push_back(std::move(block));
  }
  return out;
}

DecryptResult<BitString> privced_decrypt(const rabe::Crs& crs, const rabe::SecretKey& sk,
                                         const rabe::HelperSecretKey& hsk, const BitString& x, HybridCiphertext& ct,
                                         Rng& rng) {
  require_scheme(ct, SchemeTag::kPriVCED);
  std::size_t n = ct.rabe_cts.size();
  if (n != ct.message_bits || ct.quantum.size() != n) return DecryptResult<BitString>::bottom();
  std::vector<DecryptResult<Bytes>> inner;
  inner.reserve(n);
  for (const auto& c : ct.rabe_cts) inner.push_back(rabe::decrypt(crs, sk, hsk, x, c));
  if (auto s = combine(n, [&](std::size_t j) { return inner[j].status(); })) return from_status(*s);

  BitString mu;
  for (std::size_t j = 0; j < n; ++j) {
    auto plain = decode_privced(inner[j].value(), ct.lambda);
    if (!plain || ct.quantum[j].n_wires() != ct.lambda) return DecryptResult<BitString>::bottom();
    auto m = qstate::measure_in_basis(ct.quantum[j], plain->first, rng);
    ct.quantum[j] = std::move(m.post_state);
    mu.push_back(plain->second ^ parity(parity_source(m.outcome, plain->first, false)));
  }
  return DecryptResult<BitString>::ok(std::move(mu));
}

DeletionCert privced_delete(HybridCiphertext& ct, Rng& rng) {
  require_scheme(ct, SchemeTag::kPriVCED);
  DeletionCert cert;
  for (auto& reg : ct.quantum) {
    auto m = qstate::measure_in_basis(reg, BasisString::hadamard(reg.n_wires()), rng);
    reg = std::move(m.post_state);
    cert.payload.append(m.outcome);
  }
  return cert;
}

bool privced_verify(const VerificationKey& vk, const DeletionCert& cert) {
  require_scheme(vk, SchemeTag::kPriVCED);
  std::size_t total = 0;
  for (const auto& b : vk.blocks) total += b.x.size();
  if (vk.blocks.empty() || cert.payload.size() != total || cert.signature) return false;
  std::size_t off = 0;
  for (const auto& b : vk.blocks) {
    for (std::size_t i = 0; i < b.x.size(); ++i)
      if (b.theta.is_hadamard(i) && cert.payload[off + i] != b.x[i]) return false;
    off += b.x.size();
  }
  return true;
}

// PubVCED

qstate::XorMap sign_map(const Bytes& sigk) {
  auto d = hash_domain("rcd.pubvced.sign-map", sigk);
  qstate::XorMap map;
  map.id = std::string(kSignMapKind) + ":" + to_hex(digest_bytes(d, 8));
  map.out_width = sig::signature_width(sig::message_bits(sigk));
  map.fn = [sigk](const BitString& v) { return sig::sign(sigk, v); };
  map.kind = kSignMapKind;
  map.param = sigk;
  return map;
}

qstate::MapResolver map_resolver() {
  return [](const std::string& kind, const Bytes& param, const std::string& id, std::size_t out_width) {
    if (kind != kSignMapKind) throw Error(Errc::kDecodeError, "unknown map kind '" + kind + "'");
    auto map = sign_map(param);
    if (map.id != id || map.out_width != out_width)
      throw Error(Errc::kDecodeError, "sign map parameters do not match its id");
    return map;
  };
}

Encrypted pubvced_encrypt(const rabe::MasterPublicKey& mpk, const BitString& x, bool b, Rng& rng,
                          const rabe::AuxState& view, std::size_t lambda) {
  return pubvced_encrypt_many(mpk, x, BitString(1, b), rng, view, lambda);
}

Encrypted pubvced_encrypt_many(const rabe::MasterPublicKey& mpk, const BitString& x, const BitString& mu, Rng& rng,
                               const rabe::AuxState& view, std::size_t lambda) {
  if (mu.empty()) throw Error(Errc::kLengthMismatch, "empty message");
  if (lambda == 0) throw Error(Errc::kParameterError, "lambda must be positive");
  Encrypted out;
  out.vk.scheme = SchemeTag::kPubVCED;
  out.ct.scheme = SchemeTag::kPubVCED;
  out.ct.lambda = lambda;
  out.ct.message_bits = mu.size();
  for (std::size_t j = 0; j < mu.size(); ++j) {
    auto keys = sig::gen(lambda, rng);
    auto xs = rng.bits(lambda);
    BasisString theta(rng.bits(lambda));
    bool masked = mu[j] ^ parity(parity_source(xs, theta, true));
    out.ct.rabe_cts.push_back(rabe::encrypt(mpk, x, encode_pubvced(keys.sigk, theta, masked), rng, view));
    out.ct.quantum.push_back(qstate::apply_xor_map(qstate::bb84_prepare(xs, theta), sign_map(keys.sigk)));
    out.vk.sig_vks.push_back(std::move(keys.vk));
  }
  return out;
}

DecryptResult<BitString> pubvced_decrypt(const rabe::Crs& crs, const rabe::SecretKey& sk,
                                         const rabe::HelperSecretKey& hsk, const BitString& x, HybridCiphertext& ct,
                                         Rng& rng) {
  require_scheme(ct, SchemeTag::kPubVCED);
  std::size_t n = ct.rabe_cts.size();
  if (n != ct.message_bits || ct.quantum.size() != n) return DecryptResult<BitString>::bottom();
  std::vector<DecryptResult<Bytes>> inner;
  inner.reserve(n);
  for (const auto& c : ct.rabe_cts) inner.push_back(rabe::decrypt(crs, sk, hsk, x, c));
  if (auto s = combine(n, [&](std::size_t j) { return inner[j].status(); })) return from_status(*s);

  BitString mu;
  for (std::size_t j = 0; j < n; ++j) {
    auto plain = decode_pubvced(inner[j].value(), ct.lambda);
    if (!plain) return DecryptResult<BitString>::bottom();
    auto map = sign_map(plain->sigk);
    auto& reg = ct.quantum[j];
    if (reg.n_wires() != ct.lambda + map.out_width) return DecryptResult<BitString>::bottom();
    auto sources = iota_wires(0, ct.lambda);
    auto targets = iota_wires(ct.lambda, map.out_width);

    auto bare = qstate::apply_xor_map(reg, map, sources, targets);
    std::vector<std::size_t> h_wires;
    for (std::size_t i = 0; i < ct.lambda; ++i)
      if (plain->theta.is_hadamard(i)) h_wires.push_back(i);
    auto m = qstate::measure_wires(bare, h_wires, BasisString::hadamard(h_wires.size()), rng);
    reg = qstate::apply_xor_map(m.post_state, map, sources, targets);
    mu.push_back(plain->masked ^ parity(m.outcome));
  }
  return DecryptResult<BitString>::ok(std::move(mu));
}

DeletionCert pubvced_delete(HybridCiphertext& ct, Rng& rng) {
  require_scheme(ct, SchemeTag::kPubVCED);
  DeletionCert cert;
  BitString sigs;
  for (auto& reg : ct.quantum) {
    auto m = qstate::measure_computational(reg, rng);
    reg = std::move(m.post_state);
    std::size_t lam = std::min(ct.lambda, m.outcome.size());
    cert.payload.append(m.outcome.slice(0, lam));
    sigs.append(m.outcome.slice(lam, m.outcome.size() - lam));
  }
  cert.signature = std::move(sigs);
  return cert;
}

bool pubvced_verify(const VerificationKey& vk, const DeletionCert& cert) {
  require_scheme(vk, SchemeTag::kPubVCED);
  std::size_t n = vk.sig_vks.size();
  if (n == 0 || !cert.signature || cert.payload.size() % n != 0) return false;
  std::size_t lambda = cert.payload.size() / n;
  std::size_t width = sig::signature_width(lambda);
  if (cert.signature->size() != n * width) return false;
  for (std::size_t j = 0; j < n; ++j)
    if (!sig::verify(vk.sig_vks[j], cert.payload.slice(j * lambda, lambda), cert.signature->slice(j * width, width)))
      return false;
  return true;
}

}  // namespace rcd::protocols
