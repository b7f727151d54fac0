#include <benchmark/benchmark.h>

#include "phidim/environment.hpp"
#include "phidim/estimators.hpp"
#include "phidim/fixtures.hpp"

namespace fx = phidim::fixtures;

static void BM_LargeEstimates(benchmark::State& state) {
  const auto env = phidim::sample_environment(fx::uniform_simplex_cantor(), 1, fx::kLargeEnvLength);
  const auto f = phidim::DimensionFunction::constant(fx::kLargePhiDelta);
  const auto k_cap = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(phidim::large_estimates(env, f, fx::kLargeWindow, k_cap));
  }
}
BENCHMARK(BM_LargeEstimates)->Arg(4'000)->Arg(5'000)->Unit(benchmark::kMillisecond);

static void BM_SmallEstimates(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto env = phidim::sample_environment(fx::two_atom_mixture(), 1, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(phidim::small_estimates(env, n));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SmallEstimates)->Arg(10'000)->Arg(100'000);
