// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rcd/rabe/rabe.hpp"

#include <algorithm>
#include <sstream>

#include "rcd/codec.hpp"
#include "rcd/error.hpp"
#include "rcd/primitives/pke.hpp"

namespace rcd::rabe {

// ---------------------------------------------------------------------------
// Encodings

Digest Crs::digest() const { return hash_domain("rabe.crs", serialize()); }

Bytes Crs::serialize() const {
  return ByteWriter()
      .u32(static_cast<std::uint32_t>(lambda))
      .u32(static_cast<std::uint32_t>(tau))
      .bytes(hash_params)
      .u32(static_cast<std::uint32_t>(max_depth))
      .take();
}

Crs Crs::deserialize(BytesView in) {
  ByteReader r(in);
  Crs c;
  c.lambda = r.u32();
  c.tau = r.u32();
  c.hash_params = r.bytes();
  c.max_depth = r.u32();
  r.expect_done();
  return c;
}

nlohmann::json Crs::to_json() const {
  return {{"lambda", lambda}, {"tau", tau}, {"hash_params", to_hex(hash_params)}, {"max_depth", max_depth},
          {"hash", "sha256"}};
}

Crs Crs::from_json(const nlohmann::json& j) {
  try {
    Crs c;
    c.lambda = j.at("lambda").get<std::size_t>();
    c.tau = j.at("tau").get<std::size_t>();
    c.hash_params = from_hex(j.at("hash_params").get<std::string>());
    c.max_depth = j.value("max_depth", kDefaultMaxDepth);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kDecodeError, std::string("crs json: ") + e.what());
  }
}

Bytes PublicKey::serialize() const { return ByteWriter().bytes(pke_pk).bytes(policy_commitment).take(); }

PublicKey PublicKey::deserialize(BytesView in) {
  ByteReader r(in);
  PublicKey pk;
  pk.pke_pk = r.bytes();
  pk.policy_commitment = r.bytes();
  r.expect_done();
  return pk;
}

PublicKey SecretKey::public_key() const { return {pke::public_key_for(pke_sk), policy_commitment(policy)}; }

Bytes SecretKey::serialize() const { return ByteWriter().bytes(pke_sk).bytes(policy.serialize()).take(); }

SecretKey SecretKey::deserialize(BytesView in) {
  ByteReader r(in);
  SecretKey sk;
  sk.pke_sk = r.bytes();
  sk.policy = Policy::deserialize(r.bytes());
  r.expect_done();
  return sk;
}

Bytes MasterPublicKey::serialize() const {
  return ByteWriter().digest(merkle_root).u64(epoch).digest(crs_digest).take();
}

MasterPublicKey MasterPublicKey::deserialize(BytesView in) {
  ByteReader r(in);
  MasterPublicKey m;
  m.merkle_root = r.digest();
  m.epoch = r.u64();
  m.crs_digest = r.digest();
  r.expect_done();
  return m;
}

Bytes HelperSecretKey::serialize() const {
  ByteWriter w;
  w.u64(slot_index).u64(epoch).u32(static_cast<std::uint32_t>(merkle_path.size()));
  for (const auto& d : merkle_path) w.digest(d);
  return w.take();
}

HelperSecretKey HelperSecretKey::deserialize(BytesView in) {
  ByteReader r(in);
  HelperSecretKey h;
  h.slot_index = r.u64();
  h.epoch = r.u64();
  std::size_t n = r.u32();
  if (n > 64) throw Error(Errc::kDecodeError, "merkle path too long");
  for (std::size_t i = 0; i < n; ++i) h.merkle_path.push_back(r.digest());
  r.expect_done();
  return h;
}

Bytes Ciphertext::serialize() const {
  ByteWriter w;
  w.u64(epoch).digest(root_binding).u32(static_cast<std::uint32_t>(entries.size()));
  for (const auto& e : entries) w.u64(e.slot_index).bytes(e.pke_ct);
  return w.take();
}

Ciphertext Ciphertext::deserialize(BytesView in) {
  ByteReader r(in);
  Ciphertext c;
  c.epoch = r.u64();
  c.root_binding = r.digest();
  std::size_t n = r.u32();
  for (std::size_t i = 0; i < n; ++i) {
    CiphertextEntry e;
    e.slot_index = r.u64();
    e.pke_ct = r.bytes();
    c.entries.push_back(std::move(e));
  }
  r.expect_done();
  return c;
}

// ---------------------------------------------------------------------------
// Merkle directory

std::size_t ceil_log2(std::size_t n) {
  std::size_t d = 0;
  while ((std::size_t{1} << d) < n) ++d;
  return d;
}

Digest leaf_hash(BytesView salt, std::size_t index, const PublicKey& pk, const Policy& policy) {
  Hasher h;
  const std::uint8_t tag = 0x00;
  h.update(BytesView(&tag, 1)).update(salt).update_u64(index).update(pk.serialize()).update(policy.serialize());
  return h.finish();
}

Digest node_hash(const Digest& left, const Digest& right) {
  Hasher h;
  const std::uint8_t tag = 0x01;
  h.update(BytesView(&tag, 1)).update_digest(left).update_digest(right);
  return h.finish();
}

namespace {

Digest padding_leaf(BytesView salt) {
  Hasher h;
  const std::uint8_t tag = 0x02;
  h.update(BytesView(&tag, 1)).update(salt);
  return h.finish();
}

}  // namespace

Digest empty_root(BytesView salt) {
  Hasher h;
  const std::uint8_t tag = 0x03;
  h.update(BytesView(&tag, 1)).update(salt);
  return h.finish();
}

bool verify_path(BytesView salt, std::size_t index, std::size_t epoch, const PublicKey& pk, const Policy& policy,
                 const std::vector<Digest>& path, const Digest& root) {
  if (index >= epoch || path.size() != ceil_log2(epoch)) return false;
  Digest cur = leaf_hash(salt, index, pk, policy);
  std::size_t pos = index;
  for (const auto& sib : path) {
    cur = (pos & 1) ? node_hash(sib, cur) : node_hash(cur, sib);
    pos >>= 1;
  }
  return cur == root;
}

AuxState::AuxState(const Crs& crs) : salt_(crs.hash_params) { roots_.push_back(empty_root(salt_)); }

const Digest& AuxState::root() const {
  if (roots_.empty()) throw Error(Errc::kParameterError, "directory was not initialized with a CRS");
  return roots_.back();
}

void AuxState::rebuild() {
  std::size_t cap = std::size_t{1} << ceil_log2(slots_.size());
  // Leaf digests depend only on (salt, index, slot); keep the ones we have.
  std::size_t known = levels_.empty() ? 0 : std::min(levels_[0].size(), slots_.size());
  std::vector<Digest> leaves(cap, padding_leaf(salt_));
  if (known) std::copy_n(levels_[0].begin(), known, leaves.begin());
  for (std::size_t i = known; i < slots_.size(); ++i) leaves[i] = leaf_hash(salt_, i, slots_[i]->pk, slots_[i]->policy);
  levels_.assign(1, std::move(leaves));
  while (levels_.back().size() > 1) {
    const auto& below = levels_.back();
    std::vector<Digest> up(below.size() / 2);
    for (std::size_t i = 0; i < up.size(); ++i) up[i] = node_hash(below[2 * i], below[2 * i + 1]);
    levels_.push_back(std::move(up));
  }
}

AuxState AuxState::with_registration(Slot slot) const {
  if (roots_.empty()) throw Error(Errc::kParameterError, "directory was not initialized with a CRS");
  AuxState next = *this;
  std::size_t index = next.slots_.size();
  next.slots_.push_back(std::make_shared<const Slot>(std::move(slot)));
  std::size_t cap = next.levels_.empty() ? 0 : next.levels_[0].size();
  if (next.slots_.size() > cap) {
    next.rebuild();
  } else {
    next.levels_[0][index] = leaf_hash(salt_, index, next.slots_[index]->pk, next.slots_[index]->policy);
    std::size_t pos = index;
    for (std::size_t l = 1; l < next.levels_.size(); ++l) {
      pos >>= 1;
      next.levels_[l][pos] = node_hash(next.levels_[l - 1][2 * pos], next.levels_[l - 1][2 * pos + 1]);
    }
  }
  next.roots_.push_back(next.levels_.back()[0]);
  return next;
}

std::vector<Digest> AuxState::path(std::size_t index) const {
  if (index >= slots_.size()) throw Error(Errc::kNotRegistered, "slot index beyond directory");
  std::vector<Digest> out;
  std::size_t pos = index;
  for (std::size_t l = 0; l + 1 < levels_.size(); ++l) {
    out.push_back(levels_[l][pos ^ 1]);
    pos >>= 1;
  }
  return out;
}

std::string AuxState::to_json_lines() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    nlohmann::json j = {{"index", i}, {"pk", to_hex(slots_[i]->pk.serialize())}, {"policy", slots_[i]->policy.to_json()}};
    out << j.dump() << '\n';
  }
  return out.str();
}

AuxState AuxState::from_json_lines(const Crs& crs, std::string_view text) {
  AuxState aux(crs);
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::kDecodeError, std::string("directory line: ") + e.what());
    }
    if (j.at("index").get<std::size_t>() != aux.epoch())
      throw Error(Errc::kDecodeError, "directory lines out of order");
    auto pk = PublicKey::deserialize(from_hex(j.at("pk").get<std::string>()));
    auto policy = Policy::from_json(j.at("policy"));
    aux = regpk(crs, aux, pk, policy).second;
  }
  return aux;
}

// ---------------------------------------------------------------------------
// Algorithms

Bytes policy_commitment(const Policy& policy) {
  return digest_bytes(hash_domain("rabe.policy", policy.serialize()), kCommitmentBytes);
}

Crs setup(std::size_t lambda, std::size_t tau, Rng& rng, std::size_t max_depth) {
  if (lambda == 0 || tau == 0) throw Error(Errc::kParameterError, "setup needs lambda >= 1 and tau >= 1");
  return {lambda, tau, rng.bytes(kSaltBytes), max_depth};
}

std::pair<PublicKey, SecretKey> keygen(const Crs& crs, const AuxState* aux, const Policy& policy, Rng& rng) {
  (void)aux;
  if (policy.depth() > crs.max_depth)
    throw Error(Errc::kPolicyTooDeep, "policy depth " + std::to_string(policy.depth()) + " exceeds " +
                                          std::to_string(crs.max_depth));
  if (policy.width_needed() > crs.tau)
    throw Error(Errc::kWidthMismatch, "policy reads attribute bits beyond tau=" + std::to_string(crs.tau));
  auto kp = pke::keygen(rng);
  SecretKey sk{std::move(kp.sk), policy};
  PublicKey pk{std::move(kp.pk), policy_commitment(policy)};
  return {std::move(pk), std::move(sk)};
}

MasterPublicKey master_public_key(const Crs& crs, const AuxState& aux) {
  return {aux.root(), aux.epoch(), crs.digest()};
}

std::pair<MasterPublicKey, AuxState> regpk(const Crs& crs, const AuxState& aux, const PublicKey& pk,
                                           const Policy& policy) {
  if (pk.pke_pk.size() != pke::kPublicKeyBytes) throw Error(Errc::kMalformedKey, "public key has wrong size");
  if (pk.policy_commitment != policy_commitment(policy))
    throw Error(Errc::kMalformedKey, "public key is not bound to the registered policy");
  if (aux.salt() != crs.hash_params) throw Error(Errc::kParameterError, "directory belongs to a different CRS");
  AuxState next = aux.with_registration({pk, policy});
  return {master_public_key(crs, next), std::move(next)};
}

namespace {

Bytes entry_nonce(BytesView r, std::size_t slot) {
  Hasher h("rabe.entry-nonce");
  h.update(r).update_u64(slot);
  return digest_bytes(h.finish(), pke::kNonceBytes);
}

}  // namespace

Ciphertext encrypt(const MasterPublicKey& mpk, const BitString& x, BytesView m, BytesView r, const AuxState& view) {
  if (r.size() != kRandomnessBytes) throw Error(Errc::kLengthMismatch, "encryption randomness must be 16 bytes");
  if (view.epoch() != mpk.epoch || view.root() != mpk.merkle_root)
    throw Error(Errc::kStaleView, "directory view does not match the master public key");
  Ciphertext ct;
  ct.epoch = mpk.epoch;
  ct.root_binding = mpk.merkle_root;
  for (std::size_t i = 0; i < view.epoch(); ++i) {
    const Slot& s = view.slot(i);
    if (!s.policy.eval(x)) continue;
    ct.entries.push_back({i, pke::encrypt(s.pk.pke_pk, m, entry_nonce(r, i))});
  }
  return ct;
}

Ciphertext encrypt(const MasterPublicKey& mpk, const BitString& x, BytesView m, Rng& rng, const AuxState& view) {
  Bytes r = rng.bytes(kRandomnessBytes);
  return encrypt(mpk, x, m, r, view);
}

HelperSecretKey update_slot(const Crs& crs, const AuxState& aux, std::size_t slot_index) {
  (void)crs;
  if (slot_index >= aux.epoch()) throw Error(Errc::kNotRegistered, "slot not registered");
  return {slot_index, aux.epoch(), aux.path(slot_index)};
}

HelperSecretKey update(const Crs& crs, const AuxState& aux, const PublicKey& pk) {
  for (std::size_t i = 0; i < aux.epoch(); ++i)
    if (aux.slot(i).pk == pk) return update_slot(crs, aux, i);
  throw Error(Errc::kNotRegistered, "public key has no slot in the directory");
}

DecryptResult<Bytes> decrypt(const Crs& crs, const SecretKey& sk, const HelperSecretKey& hsk, const BitString& x,
                             const Ciphertext& ct) {
  if (hsk.epoch < ct.epoch) return DecryptResult<Bytes>::get_update();
  if (x.size() != crs.tau) return DecryptResult<Bytes>::bottom();
  if (!sk.policy.eval(x)) return DecryptResult<Bytes>::bottom();
  if (hsk.epoch == ct.epoch &&
      !verify_path(crs.hash_params, hsk.slot_index, hsk.epoch, sk.public_key(), sk.policy, hsk.merkle_path,
                   ct.root_binding))
    return DecryptResult<Bytes>::bottom();
  for (const auto& e : ct.entries) {
    if (e.slot_index != hsk.slot_index) continue;
    auto m = pke::decrypt(sk.pke_sk, e.pke_ct);
    return m ? DecryptResult<Bytes>::ok(std::move(*m)) : DecryptResult<Bytes>::bottom();
  }
  return DecryptResult<Bytes>::bottom();
}

}  // namespace rcd::rabe
