// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "rcd/error.hpp"
#include "rcd/primitives/io.hpp"
#include "rcd/primitives/oss.hpp"
#include "rcd/primitives/pke.hpp"
#include "rcd/primitives/sig.hpp"
#include "rcd/primitives/skecd.hpp"
#include "rcd/primitives/status.hpp"
#include "rcd/primitives/we.hpp"
#include "rcd/primitives/zka.hpp"

namespace rcd {
namespace {

template <typename F>
Errc error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no rcd::Error thrown";
  return Errc::kIoError;
}

TEST(SecurityStatus, EveryPrimitiveIsFlagged) {
  auto all = primitives::security_status();
  EXPECT_EQ(all.size(), 7u);
  for (const auto& p : all) EXPECT_EQ(p.status, primitives::SecurityStatus::kFunctionalReferenceOnly) << p.name;
}

TEST(Pke, RoundTrip) {
  Rng rng(1);
  for (int t = 0; t < 1000; ++t) {
    auto kp = pke::keygen(rng);
    Bytes m = rng.bytes(rng.below(64));
    Bytes r = rng.bytes(pke::kNonceBytes);
    auto ct = pke::encrypt(kp.pk, m, r);
    EXPECT_EQ(ct.size(), pke::ciphertext_bytes(m.size()));
    auto back = pke::decrypt(kp.sk, ct);
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, m);
  }
}

TEST(Pke, WrongKeyIsBottom) {
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    auto a = pke::keygen(rng);
    auto b = pke::keygen(rng);
    auto ct = pke::encrypt(a.pk, rng.bytes(8), rng);
    EXPECT_FALSE(pke::decrypt(b.sk, ct).has_value());
  }
}

TEST(Pke, DeterministicGivenNonce) {
  Rng rng(3);
  auto kp = pke::keygen(rng);
  Bytes m = rng.bytes(20);
  Bytes r = rng.bytes(pke::kNonceBytes);
  EXPECT_EQ(pke::encrypt(kp.pk, m, r), pke::encrypt(kp.pk, m, r));
}

TEST(Pke, TamperedCiphertextIsBottom) {
  Rng rng(4);
  auto kp = pke::keygen(rng);
  auto ct = pke::encrypt(kp.pk, rng.bytes(10), rng);
  ct[pke::kNonceBytes + 3] ^= 1;
  EXPECT_FALSE(pke::decrypt(kp.sk, ct).has_value());
  EXPECT_FALSE(pke::decrypt(kp.sk, Bytes(5)).has_value());
}

TEST(Sig, RoundTrip) {
  Rng rng(5);
  auto kp = sig::gen(32, rng);
  EXPECT_EQ(kp.sig_width, 32u * 128u);
  for (int t = 0; t < 1000; ++t) {
    BitString m = rng.bits(32);
    EXPECT_TRUE(sig::verify(kp.vk, m, sig::sign(kp.sigk, m)));
  }
}

TEST(Sig, EverySingleBitFlipRejected) {
  Rng rng(6);
  auto kp = sig::gen(16, rng);
  BitString m = rng.bits(16);
  auto s = sig::sign(kp.sigk, m);
  for (std::size_t i = 0; i < 16; ++i) {
    BitString flipped = m;
    flipped.flip(i);
    EXPECT_FALSE(sig::verify(kp.vk, flipped, s)) << i;
  }
}

TEST(Sig, Deterministic) {
  Rng rng(7);
  auto kp = sig::gen(16, rng);
  BitString m = rng.bits(16);
  EXPECT_EQ(sig::sign(kp.sigk, m), sig::sign(kp.sigk, m));
  EXPECT_EQ(sig::verification_key_for(kp.sigk), kp.vk);
}

TEST(Sig, WrongWidths) {
  Rng rng(8);
  auto kp = sig::gen(8, rng);
  EXPECT_EQ(error_code([&] { sig::sign(kp.sigk, rng.bits(9)); }), Errc::kLengthMismatch);
  EXPECT_FALSE(sig::verify(kp.vk, rng.bits(8), rng.bits(10)));
}

zka::RelationCheck even_relation() {
  return [](const zka::Statement&, BytesView w) { return !w.empty() && w[0] % 2 == 0; };
}

TEST(Zka, CompletenessBindingAndSimulation) {
  Bytes y{1, 2, 3};
  zka::Statement st{"even", {9, 9}};
  zka::Statement other{"even", {9, 8}};
  Bytes w{4};
  auto pi = zka::prove(st, w, y, even_relation());
  EXPECT_TRUE(zka::verify(st, pi, y));
  EXPECT_FALSE(zka::verify(other, pi, y));
  EXPECT_FALSE(zka::verify(st, pi, Bytes{7}));
  auto sim = zka::simulate(st, y);
  EXPECT_TRUE(zka::verify(st, sim, y));
  EXPECT_EQ(zka::ProofObject::deserialize(pi.serialize()), pi);
  EXPECT_EQ(error_code([&] { zka::prove(st, Bytes{3}, y, even_relation()); }), Errc::kBadWitness);
  auto rejected = pi;
  rejected.accept = false;
  EXPECT_FALSE(zka::verify(st, rejected, y));
}

TEST(Io, IdentityOnAllTwoBitInputs) {
  auto prog = io::obfuscate(io::IdentityCircuit{2});
  for (int v = 0; v < 4; ++v) {
    BitString in = BitString::from_uint(static_cast<std::uint64_t>(v), 2);
    EXPECT_EQ(io::eval(prog, in), in);
  }
}

TEST(Io, DistinctCircuitsStayDistinctAndCapEnforced) {
  auto a = io::obfuscate(io::XorMaskCircuit{BitString::from_string("01")});
  auto b = io::obfuscate(io::XorMaskCircuit{BitString::from_string("10")});
  EXPECT_NE(a.description(), b.description());
  EXPECT_NE(a.eval(BitString::from_string("00")), b.eval(BitString::from_string("00")));
  EXPECT_EQ(error_code([] { io::obfuscate(io::IdentityCircuit{10}, 4); }), Errc::kCircuitTooLarge);
}

TEST(Oss, SignVerifyAndOneShot) {
  Rng rng(9);
  auto crs = oss::setup(rng);
  auto kp = oss::keygen(crs, rng);
  auto copy = kp.sk;
  auto s1 = kp.sk.sign(true);
  EXPECT_TRUE(oss::verify(crs, kp.pk, s1, true));
  EXPECT_FALSE(oss::verify(crs, kp.pk, s1, false));
  EXPECT_TRUE(copy.consumed());
  EXPECT_EQ(error_code([&] { copy.sign(false); }), Errc::kOneShotConsumed);
  auto other_crs = oss::setup(rng);
  EXPECT_FALSE(oss::verify(other_crs, kp.pk, s1, true));
}

TEST(Oss, SerializeKeepsState) {
  Rng rng(10);
  auto crs = oss::setup(rng);
  auto kp = oss::keygen(crs, rng);
  auto fresh = oss::SecretKey::deserialize(kp.sk.serialize());
  EXPECT_FALSE(fresh.consumed());
  auto s0 = fresh.sign(false);
  EXPECT_TRUE(oss::verify(crs, kp.pk, s0, false));
  auto spent = oss::SecretKey::deserialize(fresh.serialize());
  EXPECT_EQ(spent.signed_message(), std::optional<bool>(false));
}

TEST(We, OssSignedZeroStatement) {
  Rng rng(11);
  auto crs = oss::setup(rng);
  auto kp0 = oss::keygen(crs, rng);
  auto kp1 = oss::keygen(crs, rng);
  Bytes m{1, 2, 3, 4};
  auto st0 = we::oss_signed_zero(crs, kp0.pk);
  auto ct = we::encrypt(st0, m, rng);
  EXPECT_EQ(ct.serialize().size(), we::ciphertext_bytes(st0, m.size()));
  EXPECT_EQ(we::Ciphertext::deserialize(ct.serialize()), ct);
  EXPECT_FALSE(we::decrypt(ct, Bytes{}).has_value());
  auto sigma0 = kp0.sk.sign(false);
  EXPECT_EQ(we::decrypt(ct, sigma0.value), m);

  auto st1 = we::oss_signed_zero(crs, kp1.pk);
  auto ct1 = we::encrypt(st1, m, rng);
  auto sigma1 = kp1.sk.sign(true);
  EXPECT_FALSE(we::decrypt(ct1, sigma1.value).has_value());
}

TEST(SkeCd, RoundTrip) {
  Rng rng(12);
  for (int t = 0; t < 1000; ++t) {
    auto key = skecd::keygen(8, 32, rng);
    BitString m = rng.bits(8);
    auto ct = skecd::encrypt(key, m);
    EXPECT_EQ(skecd::decrypt(key, ct, rng), m);
  }
}

TEST(SkeCd, KeyReuseRejected) {
  Rng rng(13);
  auto key = skecd::keygen(2, 8, rng);
  skecd::encrypt(key, rng.bits(2));
  auto copy = key;
  EXPECT_EQ(error_code([&] { skecd::encrypt(copy, rng.bits(2)); }), Errc::kKeyReuse);
}

TEST(SkeCd, KeyBitsRoundTrip) {
  Rng rng(14);
  auto key = skecd::keygen(3, 5, rng);
  auto bits = key.to_bits();
  EXPECT_EQ(bits.size(), 30u);
  auto back = skecd::Key::from_bits(bits, 3, 5);
  EXPECT_EQ(back.to_bits(), bits);
}

TEST(SkeCd, HonestDeleteVerifies) {
  Rng rng(15);
  for (int t = 0; t < 10000; ++t) {
    auto key = skecd::keygen(1, 8, rng);
    auto ct = skecd::encrypt(key, rng.bits(1));
    auto cert = skecd::delete_ciphertext(ct, rng);
    ASSERT_TRUE(skecd::verify(key, cert));
  }
}

TEST(SkeCd, TruncatedCertRejected) {
  Rng rng(16);
  auto key = skecd::keygen(2, 8, rng);
  auto ct = skecd::encrypt(key, rng.bits(2));
  auto cert = skecd::delete_ciphertext(ct, rng);
  cert.payload = cert.payload.slice(0, 15);
  EXPECT_FALSE(skecd::verify(key, cert));
}

TEST(SkeCd, ComputationalMeasurerAcceptanceIsTwoToMinusH) {
  Rng rng(17);
  auto key = skecd::keygen(1, 16, rng);
  auto fresh = skecd::encrypt(key, rng.bits(1));
  std::size_t h = key.blocks()[0].theta.hadamard_count();
  const int trials = 20000;
  int accepted = 0;
  for (int t = 0; t < trials; ++t) {
    auto m = qstate::measure_computational(fresh.quantum[0], rng);
    accepted += skecd::verify(key, DeletionCert{m.outcome, std::nullopt});
  }
  double p = std::ldexp(1.0, -static_cast<int>(h));
  double sigma = std::sqrt(p * (1 - p) / trials);
  EXPECT_NEAR(accepted / static_cast<double>(trials), p, 4 * sigma + 1e-12);
}

TEST(SkeCd, DecryptAfterDeleteIsCoinFlip) {
  Rng rng(18);
  const int trials = 4000;
  int correct = 0;
  for (int t = 0; t < trials; ++t) {
    auto key = skecd::keygen(1, 8, rng);
    // force at least one computational position so the mask is at risk
    BitString m = rng.bits(1);
    auto ct = skecd::encrypt(key, m);
    if (key.blocks()[0].theta.hadamard_count() == 8) {
      ++correct;  // empty mask: parity carries no information either way
      continue;
    }
    skecd::delete_ciphertext(ct, rng);
    correct += skecd::decrypt(key, ct, rng) == m;
  }
  // Only the all-Hadamard keys (prob 2^-8) can be correct deterministically.
  double p = 0.5 + 0.5 / 256;
  EXPECT_NEAR(correct / static_cast<double>(trials), p, 4 * std::sqrt(0.25 / trials));
}

TEST(SkeCd, DeterministicReplay) {
  auto run = [] {
    Rng rng(99);
    auto key = skecd::keygen(4, 8, rng);
    auto ct = skecd::encrypt(key, rng.bits(4));
    auto cert = skecd::delete_ciphertext(ct, rng);
    return std::make_pair(key.to_bits(), cert.payload);
  };
  EXPECT_EQ(run(), run());
}

}  // namespace
}  // namespace rcd
