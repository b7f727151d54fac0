#include "phidim/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phidim/errors.hpp"

namespace phidim {

namespace {

/// Neumaier compensated sum; long blocks of equal terms stay exact to ~1 ulp.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

void check_window(const Environment& env, Window w, std::size_t k_cap, NumeratorShift shift) {
  if (w.n_min < 1 || w.n_min > w.n_max) {
    throw WindowError("window must satisfy 1 <= N_min <= N_max");
  }
  if (k_cap < 1) throw WindowError("k_cap must be positive");
  if (env.length() < w.n_max + k_cap) {
    throw WindowError("environment length " + std::to_string(env.length()) +
                      " is shorter than N_max + k_cap = " + std::to_string(w.n_max + k_cap));
  }
  if (shift.lead + shift.trail >= k_cap) {
    throw WindowError("numerator shift leaves no levels below k_cap");
  }
}

void check_prefix(const Environment& env, std::size_t n) {
  if (n < 1 || n > env.length()) {
    throw WindowError("prefix length " + std::to_string(n) + " outside [1, " +
                      std::to_string(env.length()) + "]");
  }
}

}  // namespace

EstimateReport large_estimates(const Environment& env, const DimensionFunction& f, Window window,
                               std::size_t k_cap, NumeratorShift shift) {
  check_window(env, window, k_cap, shift);
  const auto x = env.x();
  const auto y = env.y();
  const auto z = env.z();

  double upper = -std::numeric_limits<double>::infinity();
  double lower = std::numeric_limits<double>::infinity();
  for (std::size_t n = window.n_min; n <= window.n_max; ++n) {
    std::size_t k0;
    try {
      k0 = depth(z, f, n, k_cap);
    } catch (const TruncationError& e) {
      throw WindowError("phi(" + std::to_string(n) + ") exceeds k_cap " + std::to_string(k_cap) +
                        ": " + e.what());
    }
    // the shifted numerator needs at least one term
    k0 = std::max(k0, shift.lead + shift.trail + 1);

    CompensatedSum sx, sy, sz;
    // numerator index i (0-based) runs over [n + lead, n + k - trail)
    for (std::size_t k = 1; k <= k_cap; ++k) {
      const std::size_t i = n + k - 1;
      sz.add(z[i]);
      if (k > shift.trail) {
        const std::size_t j = i - shift.trail;
        if (j >= n + shift.lead) {
          sx.add(x[j]);
          sy.add(y[j]);
        }
      }
      if (k < k0) continue;
      const double denom = sz.value();
      upper = std::max(upper, sy.value() / denom);
      lower = std::min(lower, sx.value() / denom);
    }
  }

  EstimateReport report;
  report.regime = Regime::Large;
  report.upper = upper;
  report.lower = lower;
  report.window = window;
  report.k_cap = k_cap;
  report.env_length = env.length();
  report.phi_id = f.describe();
  return report;
}

double large_upper(const Environment& env, const DimensionFunction& f, Window window,
                   std::size_t k_cap, NumeratorShift shift) {
  return large_estimates(env, f, window, k_cap, shift).upper;
}

double large_lower(const Environment& env, const DimensionFunction& f, Window window,
                   std::size_t k_cap, NumeratorShift shift) {
  return large_estimates(env, f, window, k_cap, shift).lower;
}

double small_alpha_hat(const Environment& env, std::size_t n) {
  check_prefix(env, n);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) best = std::max(best, env.y()[i] / env.z()[i]);
  return best;
}

double small_beta_hat(const Environment& env, std::size_t n) {
  check_prefix(env, n);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) best = std::min(best, env.x()[i] / env.z()[i]);
  return best;
}

EstimateReport small_estimates(const Environment& env, std::size_t n) {
  EstimateReport report;
  report.regime = Regime::Small;
  report.upper = small_alpha_hat(env, n);
  report.lower = small_beta_hat(env, n);
  report.window = {1, n};
  report.k_cap = 0;
  report.env_length = env.length();
  report.phi_id = "-";
  return report;
}

std::vector<ChainViolation> sanity_chain(const EstimateReport& small, const EstimateReport& large) {
  std::vector<ChainViolation> out;
  auto check = [&](const char* relation, double lhs, double rhs) {
    if (std::isinf(lhs) && std::isinf(rhs) && lhs == rhs) return;
    const double slack = 1e-12 * std::max(std::abs(lhs), std::abs(rhs));
    if (lhs > rhs + slack) out.push_back({relation, lhs - rhs});
  };
  check("small.lower <= large.lower", small.lower, large.lower);
  check("large.lower <= large.upper", large.lower, large.upper);
  check("large.upper <= small.upper", large.upper, small.upper);
  return out;
}

}  // namespace phidim
