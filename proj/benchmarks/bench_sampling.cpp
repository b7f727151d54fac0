#include <benchmark/benchmark.h>

#include "phidim/environment.hpp"
#include "phidim/experiments.hpp"
#include "phidim/fixtures.hpp"

namespace fx = phidim::fixtures;

static void BM_SampleUniformSimplex(benchmark::State& state) {
  const auto spec = fx::uniform_simplex_cantor();
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto env = phidim::sample_environment(spec, seed++, n);
    benchmark::DoNotOptimize(env.z().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleUniformSimplex)->Arg(1'000)->Arg(10'000)->Arg(100'000);

static void BM_SampleInverseSquare(benchmark::State& state) {
  const auto spec = fx::inverse_square();
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto env = phidim::sample_environment(spec, seed++, n);
    benchmark::DoNotOptimize(env.z().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleInverseSquare)->Arg(10'000);

static void BM_MomentOracle(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(phidim::mc_moment_oracle(t, 100'000, 7));
  }
  state.SetItemsProcessed(state.iterations() * 100'000);
}
BENCHMARK(BM_MomentOracle)->Arg(2)->Arg(6);
