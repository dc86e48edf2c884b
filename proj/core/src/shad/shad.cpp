// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rcd/shad/shad.hpp"

#include <string>

#include "rcd/codec.hpp"

namespace rcd::shad {

namespace {

constexpr std::size_t kMaxRows = std::size_t{1} << 20;

template <typename T, typename Enc>
void write_grid(ByteWriter& w, const Grid<T>& g, Enc&& enc) {
  w.u32(static_cast<std::uint32_t>(g.rows()));
  for (const auto& cell : g.cells()) w.bytes(enc(cell));
}

template <typename T, typename Dec>
Grid<T> read_grid(ByteReader& r, Dec&& dec) {
  std::size_t rows = r.u32();
  if (rows > kMaxRows) throw Error(Errc::kDecodeError, "grid too large");
  Grid<T> g(rows);
  for (auto& cell : g.cells()) {
    Bytes b = r.bytes();
    cell = dec(BytesView(b));
  }
  return g;
}

void require_rows(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    throw Error(Errc::kLengthMismatch,
                std::string(what) + " has " + std::to_string(got) + " rows, expected " + std::to_string(want));
}

Bytes bit_byte(bool v) { return Bytes{static_cast<std::uint8_t>(v ? 1 : 0)}; }

Grid<Bytes> draw_randomness(std::size_t rows, Rng& rng) {
  Grid<Bytes> r(rows);
  for (auto& cell : r.cells()) cell = rng.bytes(rabe::kRandomnessBytes);
  return r;
}

Grid<rabe::Ciphertext> encrypt_cells(const MasterPublicKey& mpk, const BitString& x, const Grid<std::uint8_t>& plain,
                                     const Grid<Bytes>& r, const AuxState& views) {
  std::size_t rows = mpk.grid.rows();
  require_rows(views.grid.rows(), rows, "directory views");
  require_rows(r.rows(), rows, "randomness grid");
  Grid<rabe::Ciphertext> out(rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (int b = 0; b < 2; ++b)
      out.at(i, b) = rabe::encrypt(mpk.grid.at(i, b), x, bit_byte(plain.at(i, b) != 0), r.at(i, b), views.grid.at(i, b));
  return out;
}

// Sub-key grid in row-major order; keygen and sim_keygen share it so equal
// seeds give equal public grids.
std::pair<PublicKey, Grid<rabe::SecretKey>> key_grid(const Crs& crs, const AuxState* aux,
                                                     const rabe::Policy& policy, Rng& rng) {
  std::size_t rows = crs.message_bits();
  if (aux) require_rows(aux->grid.rows(), rows, "aux");
  PublicKey pk{Grid<rabe::PublicKey>(rows)};
  Grid<rabe::SecretKey> sks(rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (int b = 0; b < 2; ++b) {
      auto [p, s] = rabe::keygen(crs.sub.at(i, b), aux ? &aux->grid.at(i, b) : nullptr, policy, rng);
      pk.grid.at(i, b) = std::move(p);
      sks.at(i, b) = std::move(s);
    }
  return {std::move(pk), std::move(sks)};
}

SecretKey selector_key(const Crs& crs, const Grid<rabe::SecretKey>& sks, const BitString& z) {
  std::vector<rabe::SecretKey> keys;
  keys.reserve(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) keys.push_back(sks.at(i, z[i]));
  return io::obfuscate(DecCircuit::left_or_right(std::make_shared<const Crs>(crs), std::move(keys), z));
}

}  // namespace

Bytes Crs::serialize() const {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(lambda)).u32(static_cast<std::uint32_t>(tau));
  write_grid(w, sub, [](const rabe::Crs& c) { return c.serialize(); });
  w.bytes(y);
  return w.take();
}

Crs Crs::deserialize(BytesView in) {
  ByteReader r(in);
  Crs c;
  c.lambda = r.u32();
  c.tau = r.u32();
  c.sub = read_grid<rabe::Crs>(r, [](BytesView b) { return rabe::Crs::deserialize(b); });
  c.y = r.bytes();
  r.expect_done();
  return c;
}

Bytes PublicKey::serialize() const {
  ByteWriter w;
  write_grid(w, grid, [](const rabe::PublicKey& p) { return p.serialize(); });
  return w.take();
}

PublicKey PublicKey::deserialize(BytesView in) {
  ByteReader r(in);
  PublicKey p{read_grid<rabe::PublicKey>(r, [](BytesView b) { return rabe::PublicKey::deserialize(b); })};
  r.expect_done();
  return p;
}

Bytes MasterPublicKey::serialize() const {
  ByteWriter w;
  write_grid(w, grid, [](const rabe::MasterPublicKey& m) { return m.serialize(); });
  w.bytes(y);
  return w.take();
}

MasterPublicKey MasterPublicKey::deserialize(BytesView in) {
  ByteReader r(in);
  MasterPublicKey m;
  m.grid = read_grid<rabe::MasterPublicKey>(r, [](BytesView b) { return rabe::MasterPublicKey::deserialize(b); });
  m.y = r.bytes();
  r.expect_done();
  return m;
}

Bytes HelperSecretKey::serialize() const {
  ByteWriter w;
  write_grid(w, grid, [](const rabe::HelperSecretKey& h) { return h.serialize(); });
  return w.take();
}

HelperSecretKey HelperSecretKey::deserialize(BytesView in) {
  ByteReader r(in);
  HelperSecretKey h{
      read_grid<rabe::HelperSecretKey>(r, [](BytesView b) { return rabe::HelperSecretKey::deserialize(b); })};
  r.expect_done();
  return h;
}

Bytes Ciphertext::serialize() const {
  ByteWriter w;
  write_grid(w, grid, [](const rabe::Ciphertext& c) { return c.serialize(); });
  w.bytes(proof.serialize());
  return w.take();
}

Ciphertext Ciphertext::deserialize(BytesView in) {
  ByteReader r(in);
  Ciphertext c;
  c.grid = read_grid<rabe::Ciphertext>(r, [](BytesView b) { return rabe::Ciphertext::deserialize(b); });
  Bytes p = r.bytes();
  c.proof = zka::ProofObject::deserialize(p);
  r.expect_done();
  return c;
}

zka::Statement Statement::encode() const {
  ByteWriter w;
  write_grid(w, mpk, [](const rabe::MasterPublicKey& m) { return m.serialize(); });
  write_grid(w, ct, [](const rabe::Ciphertext& c) { return c.serialize(); });
  w.bits(x);
  return {kRelationName, w.take()};
}

Bytes Witness::serialize() const {
  ByteWriter w;
  w.bits(mu);
  write_grid(w, r, [](const Bytes& b) { return b; });
  return w.take();
}

Witness Witness::deserialize(BytesView in) {
  ByteReader r(in);
  Witness w;
  w.mu = r.bits();
  w.r = read_grid<Bytes>(r, [](BytesView b) { return Bytes(b.begin(), b.end()); });
  r.expect_done();
  return w;
}

DecCircuit DecCircuit::left_or_right(std::shared_ptr<const Crs> crs, std::vector<rabe::SecretKey> keys,
                                     BitString z) {
  require_rows(keys.size(), crs->message_bits(), "hardcoded keys");
  require_rows(z.size(), crs->message_bits(), "selector");
  DecCircuit c;
  c.variant_ = Variant::kLeftOrRight;
  c.crs_ = std::move(crs);
  c.keys_ = std::move(keys);
  c.z_ = std::move(z);
  c.compile();
  return c;
}

DecCircuit DecCircuit::left_only(std::shared_ptr<const Crs> crs, std::vector<rabe::SecretKey> keys) {
  require_rows(keys.size(), crs->message_bits(), "hardcoded keys");
  DecCircuit c;
  c.variant_ = Variant::kLeftOnly;
  c.crs_ = std::move(crs);
  c.keys_ = std::move(keys);
  c.compile();
  return c;
}

void DecCircuit::compile() {
  std::size_t rows = crs_->message_bits();
  ops_.clear();
  ops_.push_back({OpKind::kVerifyProof});
  for (std::size_t i = 0; i < rows; ++i) {
    int column = variant_ == Variant::kLeftOnly ? 0 : (z_[i] ? 1 : 0);
    ops_.push_back({OpKind::kDecryptSlot, i, column});
  }
  ops_.push_back({OpKind::kOutput});
  crs_digests_.clear();
  for (const auto& c : crs_->sub.cells()) crs_digests_.push_back(c.digest());
}

Bytes DecCircuit::serialize() const {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(variant_)).bytes(crs_->serialize()).bits(z_);
  w.u32(static_cast<std::uint32_t>(keys_.size()));
  for (const auto& k : keys_) w.bytes(k.serialize());
  w.u32(static_cast<std::uint32_t>(ops_.size()));
  for (const auto& op : ops_)
    w.u8(static_cast<std::uint8_t>(op.kind)).u32(static_cast<std::uint32_t>(op.row)).u8(
        static_cast<std::uint8_t>(op.column));
  return w.take();
}

DecCircuit DecCircuit::deserialize(BytesView in) {
  ByteReader r(in);
  std::uint8_t variant = r.u8();
  if (variant > 1) throw Error(Errc::kDecodeError, "unknown circuit variant");
  Bytes crs_bytes = r.bytes();
  auto crs = std::make_shared<const Crs>(Crs::deserialize(crs_bytes));
  BitString z = r.bits();
  std::size_t nkeys = r.u32();
  if (nkeys > kMaxRows) throw Error(Errc::kDecodeError, "too many hardcoded keys");
  std::vector<rabe::SecretKey> keys;
  for (std::size_t i = 0; i < nkeys; ++i) {
    Bytes k = r.bytes();
    keys.push_back(rabe::SecretKey::deserialize(k));
  }
  std::size_t nops = r.u32();
  if (nops > kMaxRows + 2) throw Error(Errc::kDecodeError, "too many circuit ops");
  std::vector<Op> ops;
  for (std::size_t i = 0; i < nops; ++i) {
    Op op;
    op.kind = static_cast<OpKind>(r.u8());
    op.row = r.u32();
    op.column = r.u8();
    ops.push_back(op);
  }
  r.expect_done();
  DecCircuit c = variant == 0 ? left_or_right(std::move(crs), std::move(keys), std::move(z))
                              : left_only(std::move(crs), std::move(keys));
  // The op list is derived from the hardcoded values; a mismatch means tampering.
  bool same = c.ops_.size() == ops.size();
  for (std::size_t i = 0; same && i < ops.size(); ++i)
    same = c.ops_[i].kind == ops[i].kind && c.ops_[i].row == ops[i].row && c.ops_[i].column == ops[i].column;
  if (!same) throw Error(Errc::kDecodeError, "circuit op list does not match its hardcoded values");
  return c;
}

DecCircuit::Output DecCircuit::evaluate(const DecInput& in) const {
  std::size_t rows = crs_->message_bits();
  if (in.ct.grid.rows() != rows || in.hsk.grid.rows() != rows) return Output::bottom();
  BitString m(rows);
  bool need_update = false;
  bool failed = false;
  for (const auto& op : ops_) {
    switch (op.kind) {
      case OpKind::kVerifyProof: {
        // d is rebuilt from the ciphertext's own (epoch, root) bindings and the
        // hardcoded sub-CRS digests.
        Grid<rabe::MasterPublicKey> mpk(rows);
        for (std::size_t k = 0; k < mpk.cells().size(); ++k) {
          const auto& c = in.ct.grid.cells()[k];
          mpk.cells()[k] = {c.root_binding, c.epoch, crs_digests_[k]};
        }
        Statement d{std::move(mpk), in.ct.grid, in.x};
        if (!zka::verify(d.encode(), in.ct.proof, crs_->y)) return Output::bottom();
        break;
      }
      case OpKind::kDecryptSlot: {
        auto res = rabe::decrypt(crs_->sub.at(op.row, op.column), keys_[op.row], in.hsk.grid.at(op.row, op.column),
                                 in.x, in.ct.grid.at(op.row, op.column));
        if (res.is_get_update()) {
          need_update = true;
        } else if (res.is_bottom()) {
          failed = true;
        } else if (auto bit = decode_bit(res.value())) {
          m.set(op.row, *bit);
        } else {
          failed = true;
        }
        break;
      }
      case OpKind::kOutput:
        if (need_update) return Output::get_update();
        if (failed) return Output::bottom();
        return Output::ok(std::move(m));
    }
  }
  return Output::bottom();
}

Bytes serialize_secret_key(const SecretKey& sk) { return sk.description(); }

SecretKey deserialize_secret_key(BytesView in) { return io::obfuscate(DecCircuit::deserialize(in)); }

const SimDictionary::Entry& SimDictionary::at(const PublicKey& pk) const {
  auto it = index_.find(pk.serialize());
  if (it == index_.end()) throw Error(Errc::kUnknownKey, "public key not in simulator dictionary");
  return entries_[it->second];
}

BitString SimDictionary::aggregate_selector() const {
  if (entries_.empty()) throw Error(Errc::kEmptyDictionary, "simulator dictionary is empty");
  BitString z = entries_.front().z_star;
  for (std::size_t k = 1; k < entries_.size(); ++k) z ^= entries_[k].z_star;
  return z;
}

void SimDictionary::insert(Entry e) {
  Bytes key = e.pk.serialize();
  if (index_.count(key)) throw Error(Errc::kParameterError, "public key already in simulator dictionary");
  index_.emplace(std::move(key), entries_.size());
  entries_.push_back(std::move(e));
}

Crs setup(std::size_t lambda, std::size_t tau, std::size_t message_bits, Rng& rng, std::size_t max_depth) {
  if (message_bits == 0) throw Error(Errc::kParameterError, "message length must be at least 1");
  if (message_bits > kMaxRows) throw Error(Errc::kParameterError, "message length too large");
  Crs crs;
  crs.lambda = lambda;
  crs.tau = tau;
  crs.sub = Grid<rabe::Crs>(message_bits);
  for (auto& c : crs.sub.cells()) c = rabe::setup(lambda, tau, rng, max_depth);
  crs.y = rng.bytes(kYBytes);
  return crs;
}

AuxState empty_aux(const Crs& crs) {
  AuxState aux{Grid<rabe::AuxState>(crs.message_bits())};
  for (std::size_t k = 0; k < aux.grid.cells().size(); ++k)
    aux.grid.cells()[k] = rabe::AuxState(crs.sub.cells()[k]);
  return aux;
}

MasterPublicKey master_public_key(const Crs& crs, const AuxState& aux) {
  require_rows(aux.grid.rows(), crs.message_bits(), "aux");
  MasterPublicKey mpk{Grid<rabe::MasterPublicKey>(crs.message_bits()), crs.y};
  for (std::size_t k = 0; k < mpk.grid.cells().size(); ++k)
    mpk.grid.cells()[k] = rabe::master_public_key(crs.sub.cells()[k], aux.grid.cells()[k]);
  return mpk;
}

std::pair<PublicKey, SecretKey> keygen(const Crs& crs, const AuxState* aux, const rabe::Policy& policy, Rng& rng) {
  auto [pk, sks] = key_grid(crs, aux, policy, rng);
  BitString z = rng.bits(crs.message_bits());
  return {std::move(pk), selector_key(crs, sks, z)};
}

std::pair<MasterPublicKey, AuxState> regpk(const Crs& crs, const AuxState& aux, const PublicKey& pk,
                                           const rabe::Policy& policy) {
  std::size_t rows = crs.message_bits();
  require_rows(aux.grid.rows(), rows, "aux");
  require_rows(pk.grid.rows(), rows, "public key");
  MasterPublicKey mpk{Grid<rabe::MasterPublicKey>(rows), crs.y};
  AuxState next{Grid<rabe::AuxState>(rows)};
  for (std::size_t k = 0; k < 2 * rows; ++k)
    std::tie(mpk.grid.cells()[k], next.grid.cells()[k]) =
        rabe::regpk(crs.sub.cells()[k], aux.grid.cells()[k], pk.grid.cells()[k], policy);
  return {std::move(mpk), std::move(next)};
}

Ciphertext encrypt(const MasterPublicKey& mpk, const BitString& x, const BitString& mu, const Grid<Bytes>& r,
                   const AuxState& views) {
  std::size_t rows = mpk.grid.rows();
  require_rows(mu.size(), rows, "message");
  Grid<std::uint8_t> plain(rows);
  for (std::size_t i = 0; i < rows; ++i) plain.at(i, 0) = plain.at(i, 1) = mu[i] ? 1 : 0;
  Ciphertext ct;
  ct.grid = encrypt_cells(mpk, x, plain, r, views);
  Statement d{mpk.grid, ct.grid, x};
  zka::Statement encoded = d.encode();
  Witness w{mu, r};
  ct.proof = zka::prove(encoded, w.serialize(), mpk.y, [&](const zka::Statement& s, BytesView wb) {
    return s.relation == encoded.relation && s.body == encoded.body &&
           relation_check(d, Witness::deserialize(wb), views);
  });
  return ct;
}

Ciphertext encrypt(const MasterPublicKey& mpk, const BitString& x, const BitString& mu, Rng& rng,
                   const AuxState& views) {
  return encrypt(mpk, x, mu, draw_randomness(mpk.grid.rows(), rng), views);
}

HelperSecretKey update(const Crs& crs, const AuxState& aux, const PublicKey& pk) {
  std::size_t rows = crs.message_bits();
  require_rows(aux.grid.rows(), rows, "aux");
  require_rows(pk.grid.rows(), rows, "public key");
  HelperSecretKey hsk{Grid<rabe::HelperSecretKey>(rows)};
  for (std::size_t k = 0; k < 2 * rows; ++k)
    hsk.grid.cells()[k] = rabe::update(crs.sub.cells()[k], aux.grid.cells()[k], pk.grid.cells()[k]);
  return hsk;
}

DecryptResult<BitString> decrypt(const SecretKey& sk, const HelperSecretKey& hsk, const BitString& x,
                                 const Ciphertext& ct) {
  return io::eval(sk, DecInput{hsk, x, ct});
}

bool relation_check(const Statement& d, const Witness& w, const AuxState& views) {
  std::size_t rows = d.mpk.rows();
  if (d.ct.rows() != rows || views.grid.rows() != rows || w.mu.size() != rows || w.r.rows() != rows) return false;
  for (std::size_t i = 0; i < rows; ++i)
    for (int b = 0; b < 2; ++b) {
      if (w.r.at(i, b).size() != rabe::kRandomnessBytes) return false;
      try {
        auto again =
            rabe::encrypt(d.mpk.at(i, b), d.x, bit_byte(w.mu[i]), w.r.at(i, b), views.grid.at(i, b));
        if (!(again == d.ct.at(i, b))) return false;
      } catch (const Error&) {
        return false;
      }
    }
  return true;
}

Statement statement_for(const MasterPublicKey& mpk, const Ciphertext& ct, const BitString& x) {
  return {mpk.grid, ct.grid, x};
}

PublicKey sim_keygen(const Crs& crs, const AuxState* aux, const rabe::Policy& policy, SimDictionary& dict, Rng& rng) {
  auto [pk, sks] = key_grid(crs, aux, policy, rng);
  BitString z_star = rng.bits(crs.message_bits());
  dict.insert({pk, std::move(sks), std::move(z_star)});
  return pk;
}

std::pair<MasterPublicKey, AuxState> sim_regpk(const Crs& crs, const AuxState& aux, const PublicKey& pk,
                                               const rabe::Policy& policy, const SimDictionary& /*dict*/) {
  return regpk(crs, aux, pk, policy);
}

SecretKey sim_corrupt(const Crs& crs, const PublicKey& pk, const SimDictionary& dict) {
  const auto& e = dict.at(pk);
  std::vector<rabe::SecretKey> keys;
  keys.reserve(crs.message_bits());
  for (std::size_t i = 0; i < crs.message_bits(); ++i) keys.push_back(e.keys.at(i, 0));
  return io::obfuscate(DecCircuit::left_only(std::make_shared<const Crs>(crs), std::move(keys)));
}

Ciphertext hybrid_ciphertext(const MasterPublicKey& mpk, const SimDictionary& dict, const BitString& x,
                             const BitString& mu, HybridVariant variant, Rng& rng, const AuxState& views,
                             const std::optional<BitString>& z) {
  std::size_t rows = mpk.grid.rows();
  if (dict.empty()) throw Error(Errc::kEmptyDictionary, "simulator dictionary is empty");
  BitString sel;
  if (variant == HybridVariant::kHyb3) {
    if (!z) throw Error(Errc::kParameterError, "Hyb3 needs a selector");
    require_rows(mu.size(), rows, "message");
    sel = *z;
  } else {
    sel = z ? *z : dict.aggregate_selector();
  }
  require_rows(sel.size(), rows, "selector");
  Grid<std::uint8_t> plain(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    bool at_sel = variant == HybridVariant::kHyb3 ? mu[i] : false;
    plain.at(i, sel[i]) = at_sel ? 1 : 0;
    plain.at(i, !sel[i]) = at_sel ? 0 : 1;
  }
  Ciphertext ct;
  ct.grid = encrypt_cells(mpk, x, plain, draw_randomness(rows, rng), views);
  ct.proof = zka::simulate(Statement{mpk.grid, ct.grid, x}.encode(), mpk.y);
  return ct;
}

Ciphertext sim_ct(const MasterPublicKey& mpk, const SimDictionary& dict, const BitString& x, Rng& rng,
                  const AuxState& views) {
  return hybrid_ciphertext(mpk, dict, x, BitString(), HybridVariant::kHyb4, rng, views);
}

SecretKey reveal(const Crs& crs, const PublicKey& pk, const SimDictionary& dict, const Ciphertext& ct,
                 const BitString& mu) {
  const auto& e = dict.at(pk);
  require_rows(mu.size(), crs.message_bits(), "message");
  require_rows(ct.grid.rows(), crs.message_bits(), "ciphertext");
  BitString sel = dict.aggregate_selector() ^ mu;
  return selector_key(crs, e.keys, sel);
}

std::optional<bool> decode_bit(BytesView m) {
  if (m.size() != 1 || m[0] > 1) return std::nullopt;
  return m[0] == 1;
}

}  // namespace rcd::shad
