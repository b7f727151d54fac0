#pragma once

// Replicated Monte Carlo runs, summary tables and the simplex oracles.

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phidim/dimfn.hpp"
#include "phidim/distribution.hpp"
#include "phidim/estimators.hpp"

namespace phidim {

struct ExperimentConfig {
  explicit ExperimentConfig(DistributionSpec s) : spec(std::move(s)) {}

  DistributionSpec spec;
  Regime regime = Regime::Large;
  DimensionFunction phi = DimensionFunction::constant(1.0);
  Window window{200, 400};
  std::size_t k_cap = kDefaultKCap;
  std::size_t env_length = 10'000;
  /// Prefix length of the small-regime running extremes.
  std::size_t prefix = 10'000;
  std::size_t replicates = 32;
  std::uint64_t base_seed = 1;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;
};

/// derive_seed(config.base_seed, r).
std::uint64_t replicate_seed(const ExperimentConfig& config, std::size_t r);

/// Replicate r on its own; identical to row r of run_replicated.
EstimateReport run_replicate(const ExperimentConfig& config, std::size_t r);

struct ColumnSummary {
  double mean = 0.0;
  double sd = 0.0;  ///< sample standard deviation (0 for a single value)
  double min = 0.0;
  double max = 0.0;
  double q05 = 0.0;
  double q50 = 0.0;
  double q95 = 0.0;
  std::optional<double> target;  ///< may be +inf (alpha)
  std::optional<double> delta;   ///< q50 - target, when the target is finite
};

/// Quantiles interpolate linearly between order statistics.
ColumnSummary summarize(std::span<const double> values, std::optional<double> target = {});

struct ReplicateRow {
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  EstimateReport report;
};

struct SummaryTable {
  std::string fixture;
  std::string spec_id;
  Regime regime = Regime::Large;
  std::vector<ReplicateRow> rows;  ///< sorted by replicate index
  ColumnSummary upper;
  ColumnSummary lower;
};

/// Runs every replicate (in parallel), then folds in replicate order.
/// Targets come from moments() (large) or extremes() (small). A failing
/// replicate aborts the batch with ReplicateError.
SummaryTable run_replicated(const ExperimentConfig& config);

/// CSV, one header comment line then one column line:
///   # phidim-replicates v1
///   replicate,seed,regime,upper,lower,n_min,n_max,k_cap,env_length,phi
/// Non-finite values print as "inf" / "-inf".
void write_replicates_csv(std::ostream& out, const SummaryTable& table);
std::vector<ReplicateRow> read_replicates_csv(std::istream& in);

/// JSON summary: fixture, spec_id, regime, and per column mean, sd, min, max,
/// q05, q50, q95, target, delta. Infinite targets are the string "inf".
std::string summary_to_json(const SummaryTable& table);

/// Rebuilds a table from its CSV and JSON summary and checks that the stored
/// statistics match the recomputed ones (1e-12 relative). Throws ConfigError.
SummaryTable load_summary(std::istream& csv, const std::string& summary_json);

struct MomentOracle {
  double ex_hat;
  double ey_hat;
  double se_x;
  double se_y;
  std::size_t samples;
};

/// Monte Carlo means of -log max p and -log min p over uniform simplex draws.
MomentOracle mc_moment_oracle(int T, std::size_t samples, std::uint64_t seed);

/// min p and max p of `samples` uniform simplex draws (normalized exponentials).
struct SimplexExtremes {
  std::vector<double> min_p;
  std::vector<double> max_p;
};
SimplexExtremes sample_simplex_extremes(int T, std::size_t samples, std::uint64_t seed);

/// Half-width of the Dvoretzky-Kiefer-Wolfowitz band: sqrt(log(2/(1-c)) / (2n)).
double dkw_epsilon(std::size_t n, double confidence);

/// sup |F_n - F| of a sample against a CDF.
template <class Cdf>
double ks_distance(std::vector<double> sample, Cdf&& cdf);

struct CdfBandCheck {
  int T = 0;
  double ks_min = 0.0;
  double ks_max = 0.0;
  double epsilon = 0.0;
  bool pass() const noexcept { return ks_min <= epsilon && ks_max <= epsilon; }
};

/// Empirical CDFs of min p and max p against min_cdf / max_cdf.
CdfBandCheck cdf_band_check(int T, std::size_t samples, std::uint64_t seed,
                            double confidence = 0.99);

struct ThresholdRow {
  std::size_t n = 0;
  double zeta = 0.0;
  double chi = 0.0;
  /// Fractions over the replicates whose depth scan finished.
  double freq_below_zeta = 0.0;
  double freq_above_chi = 0.0;
  std::size_t counted = 0;
  std::size_t truncated = 0;
};

/// For each N, how often phi(N) < zeta_N(G) and phi(N) > chi_N(H) across
/// replicates. Diagnostic only. Needs EZ from moments(spec).
std::vector<ThresholdRow> depth_threshold_study(const DistributionSpec& spec,
                                                const DimensionFunction& f, double g_value,
                                                double h_value, std::span<const std::size_t> n_grid,
                                                std::size_t replicates, std::uint64_t seed,
                                                std::size_t extra_levels = 4096,
                                                unsigned workers = 0);

/// True when values[i+1] <= values[i] + slack for every i >= start.
bool non_increasing_from(std::span<const double> values, std::size_t start, double slack = 0.0);

// ---------------------------------------------------------------------------

template <class Cdf>
double ks_distance(std::vector<double> sample, Cdf&& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::max(static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n));
  }
  return d;
}

}  // namespace phidim
