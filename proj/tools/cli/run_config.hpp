#pragma once

// Experiment config files (JSON with comments). Every section but the spec is
// optional; see configs/README.md for the full schema.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phidim/dimfn.hpp"
#include "phidim/distribution.hpp"
#include "phidim/estimators.hpp"
#include "phidim/moran.hpp"

namespace phidim::cli {

struct LargeSection {
  DimensionFunction phi = DimensionFunction::constant(1.0);
  Window window{200, 400};
  std::size_t k_cap = kDefaultKCap;
  std::size_t env_length = 10'000;
};

struct SmallSection {
  std::size_t prefix = 10'000;
};

struct TreeSection {
  int depth = 6;
  PlacementPolicy policy = PlacementPolicy::EquallySpaced;
  bool exact = false;
};

struct VerifySection {
  std::size_t environments = 20;
  std::size_t queries = 1000;  ///< spread over the environments
  int depth = 12;
  std::size_t leaf_budget = 200'000;  ///< sandwich trees are made shallower to fit
  std::optional<double> tau_check;    ///< separation test constant (defaults to tau)
  int identities_max = 20;
  std::vector<int> cdf_T{2, 3, 4, 5};
  std::size_t cdf_samples = 1'000'000;
};

struct McSection {
  std::vector<int> T{2, 3, 4, 5, 6};
  std::size_t samples = 1'000'000;
  double sigmas = 4.0;
};

struct RunConfig {
  explicit RunConfig(DistributionSpec s) : spec(std::move(s)) {}

  std::string name;
  DistributionSpec spec;
  std::optional<LargeSection> large;
  std::optional<SmallSection> small;
  std::size_t replicates = 32;
  std::uint64_t seed = 1;
  std::size_t sample_depth = 20;
  TreeSection tree;
  VerifySection verify;
  McSection mc;
};

/// Throws ConfigError on malformed JSON or fields, InvalidSpec on a bad spec.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::string& path);

DimensionFunction phi_from_json_text(std::string_view text);

}  // namespace phidim::cli
