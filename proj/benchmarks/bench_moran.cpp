#include <benchmark/benchmark.h>

#include "phidim/environment.hpp"
#include "phidim/fixtures.hpp"
#include "phidim/moran.hpp"

namespace fx = phidim::fixtures;

static void BM_BuildFloatTree(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const auto env = phidim::sample_environment(fx::middle_third(), 1, static_cast<std::size_t>(depth));
  for (auto _ : state) {
    auto tree = phidim::build_tree(env, 1.0 / 3.0, phidim::PlacementPolicy::EquallySpaced, depth);
    benchmark::DoNotOptimize(tree.leaf_count());
  }
}
BENCHMARK(BM_BuildFloatTree)->Arg(10)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_BuildExactTree(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const auto env = phidim::sample_environment(fx::middle_third(), 1, static_cast<std::size_t>(depth));
  for (auto _ : state) {
    auto tree = phidim::build_exact_tree(env, 1.0 / 3.0, phidim::PlacementPolicy::EquallySpaced, depth);
    benchmark::DoNotOptimize(tree.leaf_count());
  }
}
BENCHMARK(BM_BuildExactTree)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_SandwichExact(benchmark::State& state) {
  const auto env = phidim::sample_environment(fx::middle_third(), 1, 10);
  const auto tree = phidim::build_exact_tree(env, 1.0 / 3.0, phidim::PlacementPolicy::EquallySpaced, 10);
  const auto queries = phidim::random_sandwich_queries(tree, 50, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(phidim::verify_sandwich<phidim::Rational>(tree, queries));
  }
  state.SetItemsProcessed(state.iterations() * 50);
}
BENCHMARK(BM_SandwichExact)->Unit(benchmark::kMillisecond);
