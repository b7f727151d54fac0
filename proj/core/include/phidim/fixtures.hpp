#pragma once

// Named level laws and the simulation protocol used to check them. The
// tolerances are empirical; the limit results give no convergence rate.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "phidim/distribution.hpp"
#include "phidim/estimators.hpp"

namespace phidim::fixtures {

/// t=2, r=1/3, p=(1/2,1/2), tau=1/3: the middle-third Cantor measure.
DistributionSpec middle_third();
/// t=2, r=1/3, p uniform on the simplex.
DistributionSpec uniform_simplex_cantor();
/// t=3, r=1/5, p uniform on the simplex.
DistributionSpec three_child_simplex();
/// 1-variable model: per level, (K=2, r=1/4) or (K=3, r=1/5) with equal
/// weights, each with the uniform probability vector.
DistributionSpec one_variable();
/// t=2, r=0.1, p=(0.2,0.8) or (0.5,0.5) with equal weights.
DistributionSpec two_atom_mixture();
/// Weights proportional to t^{-2}, r=1/(4t), uniform p; truncated at t_max.
DistributionSpec inverse_square(int t_max = 64);
/// t=2, r uniform on (0,1/2], p=(1/2,1/2). Not realizable with separation on
/// [0,1] (r exceeds the bound near 1/2); used for moments only.
DistributionSpec uniform_ratio_halves();

struct NamedFixture {
  std::string key;
  DistributionSpec spec;
};

/// Every fixture above, keyed "middle-third", "uniform-simplex",
/// "three-child", "one-variable", "two-atom", "inverse-square", "uniform-ratio".
std::vector<NamedFixture> all();
/// Throws ConfigError for an unknown key.
DistributionSpec by_name(const std::string& key);

// Large-regime protocol.
inline constexpr double kLargePhiDelta = 10.0;  ///< Phi = Constant(10)
inline constexpr Window kLargeWindow{200, 400};
inline constexpr std::size_t kLargeKCap = 5000;
inline constexpr std::size_t kLargeEnvLength = 10'000;
inline constexpr std::size_t kReplicates = 32;
inline constexpr std::uint64_t kBaseSeed = 1;
inline constexpr double kLargeTolerance = 0.05;
inline constexpr double kOneVariableTolerance = 0.03;

// Small-regime protocol.
inline constexpr std::size_t kSmallPrefix = 10'000;
inline constexpr std::size_t kDivergencePrefix = 100'000;
inline constexpr std::size_t kDivergenceSeeds = 100;
inline constexpr double kDivergenceAlphaLevel = 2.0;
inline constexpr double kDivergenceBetaLevel = 0.05;
inline constexpr double kDivergenceFraction = 0.95;

// Simplex oracles.
inline constexpr std::size_t kOracleSamples = 1'000'000;
inline constexpr double kOracleSigmas = 4.0;
inline constexpr double kDkwConfidence = 0.99;

// Sandwich checks.
inline constexpr int kSandwichDepth = 12;
inline constexpr std::size_t kSandwichEnvironments = 20;
inline constexpr std::size_t kSandwichQueries = 1000;

}  // namespace phidim::fixtures
