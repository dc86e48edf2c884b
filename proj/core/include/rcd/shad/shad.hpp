// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "rcd/bits.hpp"
#include "rcd/error.hpp"
#include "rcd/hash.hpp"
#include "rcd/primitives/io.hpp"
#include "rcd/primitives/zka.hpp"
#include "rcd/rabe/rabe.hpp"
#include "rcd/result.hpp"
#include "rcd/rng.hpp"

namespace rcd::shad {

inline constexpr std::size_t kDefaultMessageBits = 8;
inline constexpr std::size_t kYBytes = 32;
inline constexpr char kRelationName[] = "shad.R";

/// [ell] x {0,1} grid stored row-major: (0,0), (0,1), (1,0), ...
template <typename T>
class Grid {
 public:
  Grid() = default;
  explicit Grid(std::size_t rows) : cells_(2 * rows) {}

  std::size_t rows() const noexcept { return cells_.size() / 2; }
  T& at(std::size_t i, int b) { return cells_.at(2 * i + static_cast<std::size_t>(b & 1)); }
  const T& at(std::size_t i, int b) const { return cells_.at(2 * i + static_cast<std::size_t>(b & 1)); }
  std::vector<T>& cells() noexcept { return cells_; }
  const std::vector<T>& cells() const noexcept { return cells_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::vector<T> cells_;
};

struct Crs {
  std::size_t lambda = 0;
  std::size_t tau = 0;
  Grid<rabe::Crs> sub;
  Bytes y;

  std::size_t message_bits() const noexcept { return sub.rows(); }
  Bytes serialize() const;
  static Crs deserialize(BytesView in);
  friend bool operator==(const Crs&, const Crs&) = default;
};

struct PublicKey {
  Grid<rabe::PublicKey> grid;

  Bytes serialize() const;
  static PublicKey deserialize(BytesView in);
  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

struct MasterPublicKey {
  Grid<rabe::MasterPublicKey> grid;
  Bytes y;

  std::size_t epoch() const { return grid.at(0, 0).epoch; }
  Bytes serialize() const;
  static MasterPublicKey deserialize(BytesView in);
  friend bool operator==(const MasterPublicKey&, const MasterPublicKey&) = default;
};

/// Curator state: one directory per sub-instance, advanced in lockstep.
struct AuxState {
  Grid<rabe::AuxState> grid;

  std::size_t epoch() const { return grid.at(0, 0).epoch(); }
};

struct HelperSecretKey {
  Grid<rabe::HelperSecretKey> grid;

  Bytes serialize() const;
  static HelperSecretKey deserialize(BytesView in);
  friend bool operator==(const HelperSecretKey&, const HelperSecretKey&) = default;
};

struct Ciphertext {
  Grid<rabe::Ciphertext> grid;
  zka::ProofObject proof;

  /// Grid row-major, then the proof.
  Bytes serialize() const;
  static Ciphertext deserialize(BytesView in);
  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

/// Public statement d of relation R.
struct Statement {
  Grid<rabe::MasterPublicKey> mpk;
  Grid<rabe::Ciphertext> ct;
  BitString x;

  zka::Statement encode() const;
};

/// Witness (mu, {r_{i,b}}).
struct Witness {
  BitString mu;
  Grid<Bytes> r;

  Bytes serialize() const;
  static Witness deserialize(BytesView in);
};

/// Evaluator input. Borrowed references; the caller keeps them alive.
struct DecInput {
  const HelperSecretKey& hsk;
  const BitString& x;
  const Ciphertext& ct;
};

/// Decryption circuit as an interpreted op list.
///
/// Serialized form: u8 variant (0 left-or-right, 1 left-only), sub-CRS
/// grid, y, selector bits, u32 key count and keys, u32 op count and ops
/// (u8 kind, u32 row, u8 column).
class DecCircuit {
 public:
  using Input = DecInput;
  using Output = DecryptResult<BitString>;

  enum class Variant : std::uint8_t { kLeftOrRight = 0, kLeftOnly = 1 };
  enum class OpKind : std::uint8_t { kVerifyProof = 0, kDecryptSlot = 1, kOutput = 2 };
  struct Op {
    OpKind kind;
    std::size_t row = 0;
    int column = 0;
  };

  /// Fig. 1 with keys[i] = sk_{i,z[i]}.
  static DecCircuit left_or_right(std::shared_ptr<const Crs> crs, std::vector<rabe::SecretKey> keys, BitString z);
  /// Fig. 2 with keys[i] = sk_{i,0}.
  static DecCircuit left_only(std::shared_ptr<const Crs> crs, std::vector<rabe::SecretKey> keys);

  Variant variant() const noexcept { return variant_; }
  /// Empty for the left-only variant.
  const BitString& selector() const noexcept { return z_; }
  const std::vector<rabe::SecretKey>& hardcoded_keys() const noexcept { return keys_; }
  const std::vector<Op>& ops() const noexcept { return ops_; }

  Bytes serialize() const;
  static DecCircuit deserialize(BytesView in);
  std::size_t gate_count() const noexcept { return ops_.size(); }
  Output evaluate(const DecInput& in) const;

 private:
  DecCircuit() = default;
  void compile();

  std::vector<Digest> crs_digests_;  // row-major, for rebuilding d

  Variant variant_ = Variant::kLeftOrRight;
  std::shared_ptr<const Crs> crs_;
  std::vector<rabe::SecretKey> keys_;
  BitString z_;
  std::vector<Op> ops_;
};

using SecretKey = io::ObfuscatedProgram<DecCircuit>;

Bytes serialize_secret_key(const SecretKey& sk);
SecretKey deserialize_secret_key(BytesView in);

/// Simulator bookkeeping B, kept in insertion order.
class SimDictionary {
 public:
  struct Entry {
    PublicKey pk;
    Grid<rabe::SecretKey> keys;
    BitString z_star;
  };

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  bool contains(const PublicKey& pk) const { return index_.count(pk.serialize()) != 0; }
  /// UnknownKey when absent.
  const Entry& at(const PublicKey& pk) const;
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  /// XOR of every stored z*_pk; EmptyDictionary when empty.
  BitString aggregate_selector() const;

  void insert(Entry e);

 private:
  std::vector<Entry> entries_;
  std::map<Bytes, std::size_t> index_;
};

enum class HybridVariant { kHyb3, kHyb4 };

Crs setup(std::size_t lambda, std::size_t tau, std::size_t message_bits, Rng& rng,
          std::size_t max_depth = rabe::kDefaultMaxDepth);
/// Empty directories for every sub-instance.
AuxState empty_aux(const Crs& crs);
MasterPublicKey master_public_key(const Crs& crs, const AuxState& aux);

/// `aux` may be null (treated as the empty directory).
std::pair<PublicKey, SecretKey> keygen(const Crs& crs, const AuxState* aux, const rabe::Policy& policy, Rng& rng);
std::pair<MasterPublicKey, AuxState> regpk(const Crs& crs, const AuxState& aux, const PublicKey& pk,
                                           const rabe::Policy& policy);
/// Explicit randomness: one kRandomnessBytes string per cell.
Ciphertext encrypt(const MasterPublicKey& mpk, const BitString& x, const BitString& mu, const Grid<Bytes>& r,
                   const AuxState& views);
Ciphertext encrypt(const MasterPublicKey& mpk, const BitString& x, const BitString& mu, Rng& rng,
                   const AuxState& views);
HelperSecretKey update(const Crs& crs, const AuxState& aux, const PublicKey& pk);
DecryptResult<BitString> decrypt(const SecretKey& sk, const HelperSecretKey& hsk, const BitString& x,
                                 const Ciphertext& ct);

/// Re-encrypts every cell with the witness randomness and compares bytes.
bool relation_check(const Statement& d, const Witness& w, const AuxState& views);
Statement statement_for(const MasterPublicKey& mpk, const Ciphertext& ct, const BitString& x);

PublicKey sim_keygen(const Crs& crs, const AuxState* aux, const rabe::Policy& policy, SimDictionary& dict, Rng& rng);
/// Same as regpk; `dict` is accepted and not read.
std::pair<MasterPublicKey, AuxState> sim_regpk(const Crs& crs, const AuxState& aux, const PublicKey& pk,
                                               const rabe::Policy& policy, const SimDictionary& dict);
SecretKey sim_corrupt(const Crs& crs, const PublicKey& pk, const SimDictionary& dict);
Ciphertext sim_ct(const MasterPublicKey& mpk, const SimDictionary& dict, const BitString& x, Rng& rng,
                  const AuxState& views);
/// Opens a sim_ct ciphertext produced under the same dictionary to `mu`.
SecretKey reveal(const Crs& crs, const PublicKey& pk, const SimDictionary& dict, const Ciphertext& ct,
                 const BitString& mu);

/// Hyb3 encrypts (mu[i], 1-mu[i]) at (z[i], 1-z[i]) and needs `z`. Hyb4
/// encrypts (0, 1) at (z*[i], 1-z*[i]); z* is `z` when given, else the
/// dictionary's aggregate. Cell randomness is drawn row-major, so equal seeds
/// line up cell by cell.
Ciphertext hybrid_ciphertext(const MasterPublicKey& mpk, const SimDictionary& dict, const BitString& x,
                             const BitString& mu, HybridVariant variant, Rng& rng, const AuxState& views,
                             const std::optional<BitString>& z = std::nullopt);

/// Decodes a one-byte sub-plaintext; nullopt unless it is 0 or 1.
std::optional<bool> decode_bit(BytesView m);

}  // namespace rcd::shad
