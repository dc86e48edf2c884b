// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <vector>

#include "rcd/protocols/system.hpp"
#include "rcd/rabe/rabe.hpp"

namespace {

using namespace rcd;
using protocols::SchemeTag;
using protocols::System;

struct Fixture {
  System sys;
  protocols::UserKey user;
  protocols::AnyHelperKey hsk;
  BitString x;
};

Fixture make(SchemeTag s, std::size_t lambda, std::size_t ell, Rng& rng) {
  protocols::SchemeParams p;
  p.lambda = lambda;
  p.message_bits = ell;
  auto sys = System::setup(s, p, rng);
  auto x = rng.bits(p.tau);
  auto user = sys.keygen(rabe::random_policy_satisfied_by(x, 3, rng), rng);
  sys.register_key(user.pk, user.policy);
  auto hsk = sys.update(user.pk);
  return {std::move(sys), std::move(user), std::move(hsk), x};
}

void BM_Encrypt(benchmark::State& state) {
  auto s = static_cast<SchemeTag>(state.range(0));
  Rng rng(10);
  auto f = make(s, 32, 8, rng);
  auto mu = rng.bits(8);
  for (auto _ : state) benchmark::DoNotOptimize(f.sys.encrypt(f.x, mu, rng));
  state.SetLabel(std::string(protocols::to_string(s)));
}

void BM_Decrypt(benchmark::State& state) {
  auto s = static_cast<SchemeTag>(state.range(0));
  Rng rng(11);
  auto f = make(s, 32, 8, rng);
  auto mu = rng.bits(8);
  for (auto _ : state) {
    state.PauseTiming();
    auto enc = f.sys.encrypt(f.x, mu, rng);
    state.ResumeTiming();
    benchmark::DoNotOptimize(f.sys.decrypt(f.user.sk, f.hsk, f.x, enc.ct, rng));
  }
  state.SetLabel(std::string(protocols::to_string(s)));
}

void BM_EraseVerify(benchmark::State& state) {
  auto s = static_cast<SchemeTag>(state.range(0));
  Rng rng(12);
  auto f = make(s, 16, 1, rng);
  auto mu = rng.bits(1);
  for (auto _ : state) {
    state.PauseTiming();
    auto enc = f.sys.encrypt(f.x, mu, rng);
    state.ResumeTiming();
    auto cert = System::erase(enc.ct, rng);
    benchmark::DoNotOptimize(System::verify(enc.vk, cert));
  }
  state.SetLabel(std::string(protocols::to_string(s)));
}

void all_schemes(benchmark::internal::Benchmark* b) {
  for (auto s : {SchemeTag::kPriVCD, SchemeTag::kPubVCD, SchemeTag::kPriVCED, SchemeTag::kPubVCED})
    b->Arg(static_cast<int>(s));
  b->Unit(benchmark::kMicrosecond);
}

BENCHMARK(BM_Encrypt)->Apply(all_schemes);
BENCHMARK(BM_Decrypt)->Apply(all_schemes);
BENCHMARK(BM_EraseVerify)->Apply(all_schemes);

// Registration plus Update on a directory of N keys.
void BM_RegisterAndUpdate(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(13);
  protocols::SchemeParams p;
  p.lambda = 16;
  for (auto _ : state) {
    auto sys = System::setup(SchemeTag::kPriVCED, p, rng);
    std::vector<protocols::AnyPublicKey> pks;
    for (std::size_t i = 0; i < n; ++i) {
      auto u = sys.keygen(rabe::random_policy(p.tau, 2, rng), rng);
      sys.register_key(u.pk, u.policy);
      pks.push_back(u.pk);
    }
    benchmark::DoNotOptimize(sys.update(pks.front()));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RegisterAndUpdate)->RangeMultiplier(4)->Range(4, 256)->Unit(benchmark::kMillisecond)->Complexity();

}  // namespace
