// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "rcd/error.hpp"
#include "rcd/shad/shad.hpp"

namespace rcd::shad {
namespace {

using rabe::Policy;

struct World {
  Crs crs;
  AuxState aux;
  MasterPublicKey mpk;
  BitString x;
  SimDictionary dict;
  std::vector<PublicKey> pks;
  std::vector<SecretKey> sks;
};

World make_world(std::size_t ell, std::size_t n, Rng& rng, bool simulated = false, std::size_t tau = 8) {
  World w;
  w.crs = setup(16, tau, ell, rng);
  w.aux = empty_aux(w.crs);
  w.mpk = master_public_key(w.crs, w.aux);
  w.x = rng.bits(tau);
  for (std::size_t k = 0; k < n; ++k) {
    Policy p = rabe::random_policy_satisfied_by(w.x, 3, rng);
    if (simulated) {
      auto pk = sim_keygen(w.crs, &w.aux, p, w.dict, rng);
      std::tie(w.mpk, w.aux) = sim_regpk(w.crs, w.aux, pk, p, w.dict);
      w.pks.push_back(pk);
    } else {
      auto [pk, sk] = keygen(w.crs, &w.aux, p, rng);
      std::tie(w.mpk, w.aux) = regpk(w.crs, w.aux, pk, p);
      w.pks.push_back(pk);
      w.sks.push_back(std::move(sk));
    }
  }
  return w;
}

// Oracle: decrypt cell (i, b) directly with the sub-key from the dictionary.
std::optional<bool> open_cell(const World& w, std::size_t user, const HelperSecretKey& hsk, const Ciphertext& ct,
                              std::size_t i, int b) {
  const auto& e = w.dict.at(w.pks[user]);
  auto r = rabe::decrypt(w.crs.sub.at(i, b), e.keys.at(i, b), hsk.grid.at(i, b), w.x, ct.grid.at(i, b));
  if (!r.is_ok() || r.value().size() != 1) return std::nullopt;
  return r.value()[0] == 1;
}

TEST(ShadSetup, GridShapeAndDeterminism) {
  Rng a(1), b(1);
  auto c1 = setup(16, 8, 4, a);
  auto c2 = setup(16, 8, 4, b);
  EXPECT_EQ(c1.sub.cells().size(), 8u);
  EXPECT_EQ(c1.y.size(), kYBytes);
  EXPECT_EQ(c1, c2);
  EXPECT_EQ(Crs::deserialize(c1.serialize()), c1);
  for (const auto& s : c1.sub.cells()) {
    EXPECT_EQ(s.lambda, 16u);
    EXPECT_EQ(s.tau, 8u);
  }
  Rng r(2);
  try {
    setup(16, 8, 0, r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kParameterError);
  }
}

TEST(ShadRegister, EpochLockstepAndY) {
  Rng rng(3);
  auto w = make_world(3, 4, rng);
  for (const auto& m : w.mpk.grid.cells()) EXPECT_EQ(m.epoch, 4u);
  for (const auto& a : w.aux.grid.cells()) EXPECT_EQ(a.epoch(), 4u);
  EXPECT_EQ(w.mpk.y, w.crs.y);
  EXPECT_EQ(MasterPublicKey::deserialize(w.mpk.serialize()), w.mpk);
}

TEST(ShadKeygen, RoundTripForAnySelector) {
  Rng rng(4);
  auto w = make_world(8, 4, rng);
  std::set<std::string> selectors;
  for (std::size_t u = 0; u < w.pks.size(); ++u) {
    selectors.insert(w.sks[u].circuit().selector().to_string());
    auto hsk = update(w.crs, w.aux, w.pks[u]);
    auto mu = rng.bits(8);
    auto ct = encrypt(w.mpk, w.x, mu, rng, w.aux);
    auto out = decrypt(w.sks[u], hsk, w.x, ct);
    ASSERT_TRUE(out.is_ok());
    EXPECT_EQ(out.value(), mu);
  }
  EXPECT_GT(selectors.size(), 1u);
}

TEST(ShadKeygen, SelectorCollisionRate) {
  // Uniform 8-bit selectors collide with probability 2^-8.
  Rng rng(5);
  auto crs = setup(8, 2, 8, rng);
  const int pairs = 2000;
  int collisions = 0;
  for (int t = 0; t < pairs; ++t) {
    auto a = keygen(crs, nullptr, Policy(), rng).second.circuit().selector();
    auto b = keygen(crs, nullptr, Policy(), rng).second.circuit().selector();
    collisions += a == b;
  }
  double p = 1.0 / 256;
  double sigma = std::sqrt(pairs * p * (1 - p));
  EXPECT_LE(std::abs(collisions - pairs * p), 4 * sigma);
}

TEST(ShadKeygen, SimulatedPublicGridMatchesReal) {
  Rng crs_rng(6);
  auto crs = setup(16, 8, 4, crs_rng);
  Rng a(7), b(7);
  SimDictionary dict;
  auto real = keygen(crs, nullptr, Policy::var(1), a).first;
  auto sim = sim_keygen(crs, nullptr, Policy::var(1), dict, b);
  EXPECT_EQ(real, sim);
  EXPECT_EQ(dict.size(), 1u);
  EXPECT_EQ(dict.at(sim).keys.cells().size(), 8u);
  EXPECT_EQ(PublicKey::deserialize(real.serialize()), real);
}

TEST(ShadEncrypt, RelationAcceptsHonestAndRejectsTampering) {
  Rng rng(8);
  auto w = make_world(4, 2, rng);
  auto mu = BitString::from_string("1011");
  Grid<Bytes> r(4);
  for (auto& c : r.cells()) c = rng.bytes(rabe::kRandomnessBytes);
  auto ct = encrypt(w.mpk, w.x, mu, r, w.aux);
  auto d = statement_for(w.mpk, ct, w.x);
  EXPECT_TRUE(relation_check(d, {mu, r}, w.aux));
  EXPECT_TRUE(zka::verify(d.encode(), ct.proof, w.mpk.y));

  auto wrong_mu = mu;
  wrong_mu.flip(2);
  EXPECT_FALSE(relation_check(d, {wrong_mu, r}, w.aux));
  auto wrong_r = r;
  wrong_r.at(1, 1)[0] ^= 1;
  EXPECT_FALSE(relation_check(d, {mu, wrong_r}, w.aux));

  auto tampered = ct;
  tampered.grid.at(3, 0).entries.at(0).pke_ct[0] ^= 0x80;
  EXPECT_FALSE(relation_check(statement_for(w.mpk, tampered, w.x), {mu, r}, w.aux));
  EXPECT_EQ(Ciphertext::deserialize(ct.serialize()), ct);
}

TEST(ShadEncrypt, BothSlotsCarryTheSameBit) {
  Rng rng(9);
  auto w = make_world(6, 3, rng, /*simulated=*/true);
  auto mu = rng.bits(6);
  auto ct = encrypt(w.mpk, w.x, mu, rng, w.aux);
  for (std::size_t u = 0; u < w.pks.size(); ++u) {
    auto hsk = update(w.crs, w.aux, w.pks[u]);
    for (std::size_t i = 0; i < 6; ++i) {
      EXPECT_EQ(open_cell(w, u, hsk, ct, i, 0), std::optional<bool>(mu[i]));
      EXPECT_EQ(open_cell(w, u, hsk, ct, i, 1), std::optional<bool>(mu[i]));
    }
  }
}

TEST(ShadEncrypt, WrongLengthAndStaleView) {
  Rng rng(10);
  auto w = make_world(4, 1, rng);
  EXPECT_THROW(encrypt(w.mpk, w.x, BitString(3), rng, w.aux), Error);
  auto old_aux = w.aux;
  auto [pk, sk] = keygen(w.crs, &w.aux, Policy(), rng);
  auto next = regpk(w.crs, w.aux, pk, Policy());
  try {
    encrypt(next.first, w.x, BitString(4), rng, old_aux);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kStaleView);
  }
}

TEST(ShadUpdate, ShapeDeterminismAndUnregistered) {
  Rng rng(11);
  auto w = make_world(3, 2, rng);
  auto h1 = update(w.crs, w.aux, w.pks[1]);
  auto h2 = update(w.crs, w.aux, w.pks[1]);
  EXPECT_EQ(h1.grid.cells().size(), 6u);
  EXPECT_EQ(h1, h2);
  EXPECT_EQ(HelperSecretKey::deserialize(h1.serialize()), h1);
  auto stranger = keygen(w.crs, &w.aux, Policy(), rng).first;
  try {
    update(w.crs, w.aux, stranger);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kNotRegistered);
  }
}

TEST(ShadDecrypt, FiveHundredRoundTrips) {
  Rng rng(12);
  auto w = make_world(8, 2, rng);
  auto hsk = update(w.crs, w.aux, w.pks[0]);
  for (int t = 0; t < 500; ++t) {
    auto mu = rng.bits(8);
    auto out = decrypt(w.sks[0], hsk, w.x, encrypt(w.mpk, w.x, mu, rng, w.aux));
    ASSERT_TRUE(out.is_ok());
    ASSERT_EQ(out.value(), mu);
  }
}

TEST(ShadDecrypt, ForeignProofGivesBottom) {
  Rng rng(13);
  auto w = make_world(4, 1, rng);
  auto hsk = update(w.crs, w.aux, w.pks[0]);
  auto ct1 = encrypt(w.mpk, w.x, BitString::from_string("0110"), rng, w.aux);
  auto ct2 = encrypt(w.mpk, w.x, BitString::from_string("0110"), rng, w.aux);
  ct1.proof = ct2.proof;
  EXPECT_TRUE(decrypt(w.sks[0], hsk, w.x, ct1).is_bottom());
  auto rejecting = ct2;
  rejecting.proof.accept = false;
  EXPECT_TRUE(decrypt(w.sks[0], hsk, w.x, rejecting).is_bottom());
}

TEST(ShadDecrypt, StaleHelperKeyAsksForUpdate) {
  Rng rng(14);
  auto w = make_world(4, 1, rng);
  auto stale = update(w.crs, w.aux, w.pks[0]);
  auto [pk, sk] = keygen(w.crs, &w.aux, Policy(), rng);
  std::tie(w.mpk, w.aux) = regpk(w.crs, w.aux, pk, Policy());
  auto ct = encrypt(w.mpk, w.x, BitString::from_string("1100"), rng, w.aux);
  EXPECT_TRUE(decrypt(w.sks[0], stale, w.x, ct).is_get_update());
  auto fresh = update(w.crs, w.aux, w.pks[0]);
  auto out = decrypt(w.sks[0], fresh, w.x, ct);
  ASSERT_TRUE(out.is_ok());
  EXPECT_EQ(out.value(), BitString::from_string("1100"));
}

TEST(ShadDecrypt, UnsatisfiedPolicyGivesBottom) {
  Rng rng(15);
  World w;
  w.crs = setup(16, 8, 4, rng);
  w.aux = empty_aux(w.crs);
  w.x = rng.bits(8);
  Policy p = rabe::random_policy_rejecting(w.x, 3, rng);
  auto [pk, sk] = keygen(w.crs, &w.aux, p, rng);
  std::tie(w.mpk, w.aux) = regpk(w.crs, w.aux, pk, p);
  auto ct = encrypt(w.mpk, w.x, BitString(4), rng, w.aux);
  EXPECT_TRUE(decrypt(sk, update(w.crs, w.aux, pk), w.x, ct).is_bottom());
}

TEST(ShadSecretKey, SerializationRoundTripAndTamper) {
  Rng rng(16);
  auto w = make_world(4, 1, rng);
  Bytes blob = serialize_secret_key(w.sks[0]);
  auto back = deserialize_secret_key(blob);
  EXPECT_EQ(back.circuit().selector(), w.sks[0].circuit().selector());
  auto mu = BitString::from_string("1001");
  auto out = decrypt(back, update(w.crs, w.aux, w.pks[0]), w.x, encrypt(w.mpk, w.x, mu, rng, w.aux));
  ASSERT_TRUE(out.is_ok());
  EXPECT_EQ(out.value(), mu);
  // Flip the column byte of the last decrypt op.
  Bytes bad = blob;
  bad[bad.size() - 7] ^= 1;
  EXPECT_THROW(deserialize_secret_key(bad), Error);
}

TEST(ShadSimCorrupt, LeftOnlyMatchesRealKeyOnHonestCiphertexts) {
  Rng rng(17);
  auto w = make_world(6, 2, rng, /*simulated=*/true);
  auto hsk = update(w.crs, w.aux, w.pks[0]);
  auto left = sim_corrupt(w.crs, w.pks[0], w.dict);
  EXPECT_EQ(left.circuit().variant(), DecCircuit::Variant::kLeftOnly);
  EXPECT_TRUE(left.circuit().selector().empty());
  auto full = reveal(w.crs, w.pks[0], w.dict, sim_ct(w.mpk, w.dict, w.x, rng, w.aux), rng.bits(6));
  for (int t = 0; t < 50; ++t) {
    auto ct = encrypt(w.mpk, w.x, rng.bits(6), rng, w.aux);
    EXPECT_EQ(decrypt(left, hsk, w.x, ct), decrypt(full, hsk, w.x, ct));
  }
  SimDictionary empty;
  try {
    sim_corrupt(w.crs, w.pks[0], empty);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kUnknownKey);
  }
}

TEST(ShadSimCorrupt, DivergesOnCraftedInvalidCiphertext) {
  Rng rng(18);
  auto w = make_world(2, 1, rng, /*simulated=*/true);
  auto hsk = update(w.crs, w.aux, w.pks[0]);
  // Slots disagree: (i,0) holds 0, (i,1) holds 1. Only a forged proof passes.
  auto crafted = hybrid_ciphertext(w.mpk, w.dict, w.x, BitString(2), HybridVariant::kHyb4, rng, w.aux,
                                   BitString::from_string("00"));
  auto left = sim_corrupt(w.crs, w.pks[0], w.dict);
  auto right = io::obfuscate(DecCircuit::left_or_right(
      std::make_shared<const Crs>(w.crs),
      {w.dict.at(w.pks[0]).keys.at(0, 1), w.dict.at(w.pks[0]).keys.at(1, 1)}, BitString::from_string("11")));
  auto a = decrypt(left, hsk, w.x, crafted);
  auto b = decrypt(right, hsk, w.x, crafted);
  ASSERT_TRUE(a.is_ok());
  ASSERT_TRUE(b.is_ok());
  EXPECT_EQ(a.value(), BitString::from_string("00"));
  EXPECT_EQ(b.value(), BitString::from_string("11"));
}

TEST(ShadSimCt, SlotsHoldZeroAtSelectorAndOneElsewhere) {
  Rng rng(19);
  auto w = make_world(5, 3, rng, /*simulated=*/true);
  auto ct = sim_ct(w.mpk, w.dict, w.x, rng, w.aux);
  auto zs = w.dict.aggregate_selector();
  EXPECT_TRUE(zka::verify(statement_for(w.mpk, ct, w.x).encode(), ct.proof, w.mpk.y));
  auto hsk = update(w.crs, w.aux, w.pks[2]);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(open_cell(w, 2, hsk, ct, i, zs[i]), std::optional<bool>(false));
    EXPECT_EQ(open_cell(w, 2, hsk, ct, i, !zs[i]), std::optional<bool>(true));
  }
}

TEST(ShadSimCt, AggregateSelectorIsXorOfEntries) {
  for (std::size_t n : {1u, 2u, 3u}) {
    Rng rng(20 + n);
    auto w = make_world(8, n, rng, /*simulated=*/true);
    BitString expect(8);
    for (const auto& e : w.dict.entries()) expect ^= e.z_star;
    EXPECT_EQ(w.dict.aggregate_selector(), expect);
    // Order independence: fold in reverse.
    BitString rev(8);
    for (auto it = w.dict.entries().rbegin(); it != w.dict.entries().rend(); ++it) rev ^= it->z_star;
    EXPECT_EQ(rev, expect);
  }
  SimDictionary empty;
  Rng rng(24);
  auto w = make_world(2, 1, rng);
  try {
    sim_ct(w.mpk, empty, w.x, rng, w.aux);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kEmptyDictionary);
  }
}

TEST(ShadReveal, OpensSimulatedCiphertextToEveryMessage) {
  Rng rng(25);
  auto w = make_world(2, 2, rng, /*simulated=*/true);
  auto ct = sim_ct(w.mpk, w.dict, w.x, rng, w.aux);
  for (std::size_t u = 0; u < 2; ++u) {
    auto hsk = update(w.crs, w.aux, w.pks[u]);
    for (const char* m : {"00", "01", "10", "11"}) {
      auto mu = BitString::from_string(m);
      auto out = decrypt(reveal(w.crs, w.pks[u], w.dict, ct, mu), hsk, w.x, ct);
      ASSERT_TRUE(out.is_ok());
      EXPECT_EQ(out.value(), mu) << m;
    }
  }
}

TEST(ShadReveal, ZeroMessageUsesAggregateSelector) {
  Rng rng(26);
  auto w = make_world(4, 2, rng, /*simulated=*/true);
  auto ct = sim_ct(w.mpk, w.dict, w.x, rng, w.aux);
  auto key = reveal(w.crs, w.pks[1], w.dict, ct, BitString(4));
  EXPECT_EQ(key.circuit().selector(), w.dict.aggregate_selector());
  auto out = decrypt(key, update(w.crs, w.aux, w.pks[1]), w.x, ct);
  ASSERT_TRUE(out.is_ok());
  EXPECT_TRUE(out.value().all_zero());
}

TEST(ShadReveal, Errors) {
  Rng rng(27);
  auto w = make_world(4, 1, rng, /*simulated=*/true);
  auto ct = sim_ct(w.mpk, w.dict, w.x, rng, w.aux);
  auto stranger = keygen(w.crs, nullptr, Policy(), rng).first;
  try {
    reveal(w.crs, stranger, w.dict, ct, BitString(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kUnknownKey);
  }
  try {
    reveal(w.crs, w.pks[0], w.dict, ct, BitString(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kLengthMismatch);
  }
}

TEST(ShadHybrid, Hyb4EqualsSimCtUnderEqualSeeds) {
  Rng rng(28);
  auto w = make_world(4, 2, rng, /*simulated=*/true);
  Rng a(99), b(99);
  EXPECT_EQ(sim_ct(w.mpk, w.dict, w.x, a, w.aux),
            hybrid_ciphertext(w.mpk, w.dict, w.x, BitString(), HybridVariant::kHyb4, b, w.aux));
}

TEST(ShadHybrid, ChangeOfVariables) {
  Rng rng(29);
  auto w = make_world(4, 2, rng, /*simulated=*/true);
  auto zs = w.dict.aggregate_selector();
  for (int t = 0; t < 20; ++t) {
    auto mu = rng.bits(4);
    std::uint64_t seed = rng.next_u64();
    Rng a(seed), b(seed);
    auto h3 = hybrid_ciphertext(w.mpk, w.dict, w.x, mu, HybridVariant::kHyb3, a, w.aux, zs ^ mu);
    auto h4 = hybrid_ciphertext(w.mpk, w.dict, w.x, mu, HybridVariant::kHyb4, b, w.aux);
    EXPECT_EQ(h3.serialize(), h4.serialize());
  }
  auto z = rng.bits(4);
  Rng a(5), b(5);
  EXPECT_EQ(hybrid_ciphertext(w.mpk, w.dict, w.x, BitString(4), HybridVariant::kHyb3, a, w.aux, z),
            hybrid_ciphertext(w.mpk, w.dict, w.x, BitString(4), HybridVariant::kHyb4, b, w.aux, z));
  EXPECT_THROW(hybrid_ciphertext(w.mpk, w.dict, w.x, BitString(4), HybridVariant::kHyb3, a, w.aux), Error);
}

}  // namespace
}  // namespace rcd::shad
