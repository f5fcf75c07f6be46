#include <benchmark/benchmark.h>

#include "phc/lsag.hpp"
#include "phc/schnorr.hpp"
#include "phc/wallet.hpp"

namespace {

using namespace phc;

struct RingFixture {
  GroupParams params;
  std::vector<KeyPair> keys;
  std::vector<GroupElement> ring;
  Bytes ctx = to_bytes("bench-ctx");
  Bytes msg = to_bytes("bench-message");

  RingFixture(GroupParams p, size_t n) : params(std::move(p)) {
    Drbg rng(42);
    for (size_t i = 0; i < n; ++i) {
      keys.push_back(keygen(params, rng));
      ring.push_back(keys.back().y);
    }
  }
};

void bench_lsag_sign(benchmark::State& state, GroupParams params) {
  RingFixture fx(std::move(params), static_cast<size_t>(state.range(0)));
  Drbg rng(7);
  for (auto _ : state) {
    auto sig =
        lsag_sign(fx.params, fx.ring, 0, fx.keys[0].x, fx.ctx, fx.msg, rng);
    benchmark::DoNotOptimize(sig);
  }
}

void bench_lsag_verify(benchmark::State& state, GroupParams params) {
  RingFixture fx(std::move(params), static_cast<size_t>(state.range(0)));
  Drbg rng(7);
  auto sig =
      lsag_sign(fx.params, fx.ring, 0, fx.keys[0].x, fx.ctx, fx.msg, rng);
  for (auto _ : state) {
    auto res = lsag_verify(fx.params, fx.ring, fx.ctx, fx.msg, sig);
    benchmark::DoNotOptimize(res);
  }
}

void bench_schnorr_sign(benchmark::State& state, GroupParams params) {
  Drbg rng(42);
  KeyPair kp = keygen(params, rng);
  Bytes msg = to_bytes("bench-message");
  for (auto _ : state) {
    auto sig = schnorr_sign(params, GroupElement{params.g}, kp.x, msg, rng);
    benchmark::DoNotOptimize(sig);
  }
}

void bench_hash_to_group(benchmark::State& state, GroupParams params) {
  uint64_t i = 0;
  for (auto _ : state) {
    auto h = hash_to_group("PHC/ctx", {to_bytes("ctx-" + std::to_string(i++))},
                           params);
    benchmark::DoNotOptimize(h);
  }
}

BENCHMARK_CAPTURE(bench_lsag_sign, test256, test256_params())
    ->Arg(8)
    ->Arg(64)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_lsag_verify, test256, test256_params())
    ->Arg(8)
    ->Arg(64)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_lsag_sign, modp2048, modp2048_params())
    ->Arg(64)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_lsag_verify, modp2048, modp2048_params())
    ->Arg(64)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_schnorr_sign, modp2048, modp2048_params())
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_hash_to_group, modp2048, modp2048_params())
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
