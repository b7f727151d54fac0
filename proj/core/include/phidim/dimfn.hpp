#pragma once

// Dimension functions Phi on (0,1) and the depth function they induce on a
// sequence of contraction ratios.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace phidim {

/// Asymptotic class of Phi relative to log|log x| / |log x|. Always declared
/// by the caller, never inferred.
enum class Regime { Large, Small, Boundary, Unclassified };

std::string to_string(Regime regime);
Regime regime_from_string(const std::string& name);

struct ConstantPhi {
  double delta;
};
struct ThetaSpectrumPhi {
  double theta;
};
/// c * log|log x| / |log x|.
struct LogLogMultiplePhi {
  double c;
};
/// Piecewise linear in (log x, Phi) between grid points, sorted by x ascending.
struct TabulatedPhi {
  std::vector<double> log_x;
  std::vector<double> value;
};

class DimensionFunction {
 public:
  using Kind = std::variant<ConstantPhi, ThetaSpectrumPhi, LogLogMultiplePhi, TabulatedPhi>;

  /// Constant(delta), delta >= 0. Declared Large for delta > 0 and Small for 0.
  static DimensionFunction constant(double delta);
  /// Phi = 1/theta - 1, theta in (0,1). Declared Large.
  static DimensionFunction theta_spectrum(double theta);
  /// c * log|log x|/|log x|, c > 0. Declared Boundary.
  static DimensionFunction loglog_multiple(double c);
  /// Grid of (x, Phi(x)) pairs with x in (0,1) and Phi > 0. Declared Unclassified.
  static DimensionFunction tabulated(std::vector<std::pair<double, double>> grid);

  /// Same function with a different declared regime.
  DimensionFunction with_regime(Regime regime) const;

  /// Phi(x) for x in (0,1).
  double operator()(double x) const;
  /// Phi evaluated at x = exp(log_x), log_x < 0. Used where x underflows.
  double at_log(double log_x) const;

  Regime regime() const noexcept { return regime_; }
  const Kind& kind() const noexcept { return kind_; }
  /// Short descriptor such as "Constant(1)" or "ThetaSpectrum(0.25)".
  std::string describe() const;

 private:
  DimensionFunction(Kind kind, Regime regime) : kind_(std::move(kind)), regime_(regime) {}

  Kind kind_;
  Regime regime_;
};

struct MonotonicityViolation {
  double x_hi;  ///< larger grid point
  double x_lo;  ///< next (smaller) grid point
  double log_value_hi;  ///< (1 + Phi(x_hi)) log x_hi
  double log_value_lo;
};

struct ValidationReport {
  std::vector<MonotonicityViolation> violations;
  /// Declared-regime warnings; informational, the declaration wins.
  std::vector<std::string> warnings;
  bool ok() const noexcept { return violations.empty(); }
};

/// Checks that x^{1+Phi(x)} does not increase as x decreases along `grid`
/// (sorted strictly decreasing, inside (0,1)); relative tolerance 1e-12.
ValidationReport validate(const DimensionFunction& f, std::span<const double> grid);

/// Compares the declared regime with the trend of Phi(x)|log x| / log|log x|
/// on log-spaced points of [1e-12, 1e-2] (clipped to a tabulated hull).
std::vector<std::string> regime_warnings(const DimensionFunction& f);

inline constexpr std::size_t kDefaultDepthCap = 1'000'000;

/// Depth function: minimal k >= 1 with
///   Z_{n+1} + ... + Z_{n+k} >= Phi(exp(-S_n)) * S_n,  S_n = Z_1 + ... + Z_n,
/// where `log_ratios[j-1]` holds Z_j = -log r_j (nats). The comparison
/// accepts a relative shortfall of 1e-12. Throws TruncationError when the
/// sequence or `k_max` is exhausted first.
std::size_t depth(std::span<const double> log_ratios, const DimensionFunction& f,
                  std::size_t n, std::size_t k_max = kDefaultDepthCap);

/// G * log(N log 2) / (2 EZ). Requires N >= 2, EZ > 0, G > 0.
double zeta_threshold(double g_value, std::size_t level, double mean_log_ratio);
/// H * log(2 N EZ) / log 2. Requires N >= 1, EZ > 0, H > 0.
double chi_threshold(double h_value, std::size_t level, double mean_log_ratio);

}  // namespace phidim
