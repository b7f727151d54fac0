#pragma once

// Empirical Phi-dimension statistics computed from an environment.
//
// Large regime: extremes over N in a window and k in [phi(N), k_cap] of the
// ratio of block sums  (Y_{N+1} + ... + Y_{N+k}) / (Z_{N+1} + ... + Z_{N+k})
// (X in place of Y for the lower value).
// Small regime: running extremes of the single-level ratios Y_i/Z_i, X_i/Z_i.

#include <cstddef>
#include <string>
#include <vector>

#include "phidim/dimfn.hpp"
#include "phidim/environment.hpp"

namespace phidim {

inline constexpr std::size_t kDefaultKCap = 5000;

struct Window {
  std::size_t n_min = 0;
  std::size_t n_max = 0;
};

/// Trims the numerator block to N+1+lead .. N+k-trail while the denominator
/// keeps N+1 .. N+k. Zero offsets give the plain statistic.
struct NumeratorShift {
  std::size_t lead = 0;
  std::size_t trail = 0;
};

struct EstimateReport {
  Regime regime = Regime::Large;
  double upper = 0.0;
  double lower = 0.0;
  Window window;
  std::size_t k_cap = 0;  ///< 0 for the small regime
  std::size_t env_length = 0;
  std::string phi_id;     ///< describe() of Phi, or "-" for the small regime
};

/// Both large-regime statistics in one pass. Requires 1 <= n_min <= n_max,
/// env length >= n_max + k_cap and phi(N) <= k_cap on the whole window;
/// throws WindowError otherwise.
EstimateReport large_estimates(const Environment& env, const DimensionFunction& f, Window window,
                               std::size_t k_cap = kDefaultKCap, NumeratorShift shift = {});

double large_upper(const Environment& env, const DimensionFunction& f, Window window,
                   std::size_t k_cap = kDefaultKCap, NumeratorShift shift = {});
double large_lower(const Environment& env, const DimensionFunction& f, Window window,
                   std::size_t k_cap = kDefaultKCap, NumeratorShift shift = {});

/// max_{i <= n} Y_i / Z_i. Requires 1 <= n <= env length.
double small_alpha_hat(const Environment& env, std::size_t n);
/// min_{i <= n} X_i / Z_i.
double small_beta_hat(const Environment& env, std::size_t n);
/// Both running extremes over the prefix of length n; window = (1, n).
EstimateReport small_estimates(const Environment& env, std::size_t n);

struct ChainViolation {
  std::string relation;  ///< e.g. "small.lower <= large.lower"
  double margin;         ///< left minus right (positive when violated)
};

/// Checks small.lower <= large.lower <= large.upper <= small.upper with a
/// relative slack of 1e-12. The small prefix must cover every level the large
/// statistics used for the chain to be guaranteed.
std::vector<ChainViolation> sanity_chain(const EstimateReport& small, const EstimateReport& large);

}  // namespace phidim
