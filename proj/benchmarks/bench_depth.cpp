#include <benchmark/benchmark.h>

#include "phidim/dimfn.hpp"
#include "phidim/environment.hpp"
#include "phidim/fixtures.hpp"

static void BM_Depth(benchmark::State& state) {
  const auto env = phidim::sample_environment(phidim::fixtures::uniform_ratio_halves(), 3, 60'000);
  const auto f = phidim::DimensionFunction::constant(static_cast<double>(state.range(1)));
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(phidim::depth(env.z(), f, n));
  }
}
BENCHMARK(BM_Depth)->Args({100, 1})->Args({1'000, 1})->Args({1'000, 10})->Args({4'000, 10});

static void BM_DepthLogLog(benchmark::State& state) {
  const auto env = phidim::sample_environment(phidim::fixtures::uniform_simplex_cantor(), 3, 20'000);
  const auto f = phidim::DimensionFunction::loglog_multiple(2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(phidim::depth(env.z(), f, 5'000));
  }
}
BENCHMARK(BM_DepthLogLog);
