#include "phidim/dimfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "format.hpp"
#include "phidim/errors.hpp"

namespace phidim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kRelTol = 1e-12;

}  // namespace

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Large: return "Large";
    case Regime::Small: return "Small";
    case Regime::Boundary: return "Boundary";
    case Regime::Unclassified: return "Unclassified";
  }
  return "Unclassified";
}

Regime regime_from_string(const std::string& name) {
  if (name == "Large") return Regime::Large;
  if (name == "Small") return Regime::Small;
  if (name == "Boundary") return Regime::Boundary;
  if (name == "Unclassified") return Regime::Unclassified;
  throw ConfigError("unknown regime '" + name + "'");
}

DimensionFunction DimensionFunction::constant(double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw DomainError("Constant dimension function needs a finite delta >= 0");
  }
  return {ConstantPhi{delta}, delta > 0.0 ? Regime::Large : Regime::Small};
}

DimensionFunction DimensionFunction::theta_spectrum(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw DomainError("ThetaSpectrum needs theta in (0,1)");
  }
  return {ThetaSpectrumPhi{theta}, Regime::Large};
}

DimensionFunction DimensionFunction::loglog_multiple(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("LogLogMultiple needs c > 0");
  return {LogLogMultiplePhi{c}, Regime::Boundary};
}

DimensionFunction DimensionFunction::tabulated(std::vector<std::pair<double, double>> grid) {
  if (grid.empty()) throw DomainError("Tabulated dimension function needs a non-empty grid");
  std::sort(grid.begin(), grid.end());
  TabulatedPhi tab;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto [x, v] = grid[i];
    if (!(x > 0.0 && x < 1.0)) throw DomainError("Tabulated grid point outside (0,1)");
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("Tabulated value must be positive");
    if (i > 0 && grid[i - 1].first == x) throw DomainError("Tabulated grid has a repeated x");
    tab.log_x.push_back(std::log(x));
    tab.value.push_back(v);
  }
  return {std::move(tab), Regime::Unclassified};
}

DimensionFunction DimensionFunction::with_regime(Regime regime) const {
  DimensionFunction copy = *this;
  copy.regime_ = regime;
  return copy;
}

double DimensionFunction::operator()(double x) const {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("dimension function argument outside (0,1)");
  return at_log(std::log(x));
}

double DimensionFunction::at_log(double log_x) const {
  if (!(log_x < 0.0)) throw DomainError("dimension function argument outside (0,1)");
  return std::visit(
      overloaded{
          [](const ConstantPhi& c) { return c.delta; },
          [](const ThetaSpectrumPhi& t) { return 1.0 / t.theta - 1.0; },
          [&](const LogLogMultiplePhi& l) {
            const double a = -log_x;
            return l.c * std::log(a) / a;
          },
          [&](const TabulatedPhi& t) {
            const auto& lx = t.log_x;
            if (log_x < lx.front() || log_x > lx.back()) {
              throw ExtrapolationError("tabulated dimension function queried outside its grid");
            }
            if (lx.size() == 1) return t.value.front();
            auto it = std::upper_bound(lx.begin(), lx.end(), log_x);
            std::size_t hi = static_cast<std::size_t>(it - lx.begin());
            if (hi == lx.size()) return t.value.back();
            const std::size_t lo = hi - 1;
            const double w = (log_x - lx[lo]) / (lx[hi] - lx[lo]);
            return t.value[lo] + w * (t.value[hi] - t.value[lo]);
          },
      },
      kind_);
}

std::string DimensionFunction::describe() const {
  using detail::fmt_num;
  return std::visit(
      overloaded{
          [](const ConstantPhi& c) { return "Constant(" + fmt_num(c.delta) + ")"; },
          [](const ThetaSpectrumPhi& t) { return "ThetaSpectrum(" + fmt_num(t.theta) + ")"; },
          [](const LogLogMultiplePhi& l) { return "LogLogMultiple(" + fmt_num(l.c) + ")"; },
          [](const TabulatedPhi& t) {
            return "Tabulated(" + std::to_string(t.log_x.size()) + " points)";
          },
      },
      kind_);
}

ValidationReport validate(const DimensionFunction& f, std::span<const double> grid) {
  if (grid.empty()) throw DomainError("validation grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] < 1.0)) throw DomainError("validation grid point outside (0,1)");
    if (i > 0 && !(grid[i] < grid[i - 1])) {
      throw DomainError("validation grid must be strictly decreasing");
    }
  }
  ValidationReport report;
  // Compare log(x^{1+Phi(x)}) so tiny x do not underflow; an additive
  // tolerance in log space is a relative tolerance on the value.
  auto log_value = [&](double x) { return (1.0 + f(x)) * std::log(x); };
  double prev = log_value(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = log_value(grid[i]);
    if (cur > prev + kRelTol) {
      report.violations.push_back({grid[i - 1], grid[i], prev, cur});
    }
    prev = cur;
  }
  report.warnings = regime_warnings(f);
  return report;
}

std::vector<std::string> regime_warnings(const DimensionFunction& f) {
  std::vector<std::string> out;
  const Regime declared = f.regime();
  if (declared != Regime::Large && declared != Regime::Small) return out;

  double lo = std::log(1e-12);
  double hi = std::log(1e-2);
  if (const auto* tab = std::get_if<TabulatedPhi>(&f.kind())) {
    lo = std::max(lo, tab->log_x.front());
    hi = std::min(hi, tab->log_x.back());
    if (!(lo < hi)) return out;
  }
  // ratio Phi(x) |log x| / log|log x|; the trend towards x -> 0 hints at the regime
  auto ratio = [&](double log_x) {
    const double a = -log_x;
    return f.at_log(log_x) * a / std::log(a);
  };
  constexpr int kPoints = 21;
  double first = ratio(hi);
  double last = first;
  for (int i = 1; i < kPoints; ++i) {
    last = ratio(hi + (lo - hi) * i / (kPoints - 1));
  }
  if (declared == Regime::Large && last < first) {
    out.push_back("declared Large but Phi(x)|log x|/log|log x| decreases from " +
                  detail::fmt_num(first, 6) + " to " + detail::fmt_num(last, 6) +
                  " on [1e-12, 1e-2]");
  } else if (declared == Regime::Small && last > first) {
    out.push_back("declared Small but Phi(x)|log x|/log|log x| increases from " +
                  detail::fmt_num(first, 6) + " to " + detail::fmt_num(last, 6) +
                  " on [1e-12, 1e-2]");
  }
  return out;
}

std::size_t depth(std::span<const double> log_ratios, const DimensionFunction& f, std::size_t n,
                  std::size_t k_max) {
  if (n == 0) throw DomainError("depth: level index must be >= 1");
  if (n > log_ratios.size()) {
    throw TruncationError("depth: environment shorter than the base level", 0.0, 0);
  }
  double s_n = 0.0;
  for (std::size_t j = 0; j < n; ++j) s_n += log_ratios[j];
  const double target = f.at_log(-s_n) * s_n;
  const double accept = target - kRelTol * std::abs(target);

  double partial = 0.0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    if (n + k > log_ratios.size()) {
      throw TruncationError("depth: environment exhausted after " + std::to_string(k - 1) +
                                " levels beyond n=" + std::to_string(n),
                            partial, k - 1);
    }
    partial += log_ratios[n + k - 1];
    if (partial >= accept) return k;
  }
  throw TruncationError("depth: cap k_max=" + std::to_string(k_max) + " reached", partial, k_max);
}

double zeta_threshold(double g_value, std::size_t level, double mean_log_ratio) {
  if (level < 2 || !(mean_log_ratio > 0.0) || !(g_value > 0.0)) {
    throw DomainError("zeta_threshold needs N >= 2, EZ > 0 and G > 0");
  }
  return g_value * std::log(static_cast<double>(level) * std::log(2.0)) / (2.0 * mean_log_ratio);
}

double chi_threshold(double h_value, std::size_t level, double mean_log_ratio) {
  if (level < 1 || !(mean_log_ratio > 0.0) || !(h_value > 0.0)) {
    throw DomainError("chi_threshold needs N >= 1, EZ > 0 and H > 0");
  }
  return h_value * std::log(2.0 * static_cast<double>(level) * mean_log_ratio) / std::log(2.0);
}

}  // namespace phidim
