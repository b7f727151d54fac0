#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace phidim {

/// One level of the construction: t children, contraction ratio r and the
/// probability vector p (length t). Derived quantities follow the usual
/// naming: m = min p, M = max p, X = -log M, Y = -log m, Z = -log r.
struct LevelDraw {
  int t = 0;
  double r = 0.0;
  std::vector<double> p;

  double min_p() const { return *std::min_element(p.begin(), p.end()); }
  double max_p() const { return *std::max_element(p.begin(), p.end()); }
  /// Lowest index attaining min p (tie-break rule for "the extreme child").
  std::size_t argmin_p() const {
    return static_cast<std::size_t>(std::min_element(p.begin(), p.end()) - p.begin());
  }
  std::size_t argmax_p() const {
    return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
  }
  double x() const { return -std::log(max_p()); }
  double y() const { return -std::log(min_p()); }
  double z() const { return -std::log(r); }

  friend bool operator==(const LevelDraw&, const LevelDraw&) = default;
};

/// Structural checks: t >= 2, |p| = t, p_i > 0, sum p = 1 within 1e-12,
/// 0 < r <= 1/2. Throws InvalidSpec naming the violated invariant.
void check_draw(const LevelDraw& draw);

/// Throws InvalidSpec when r > feasible_ratio_bound(t, tau).
void check_draw_separation(const LevelDraw& draw, double tau);

}  // namespace phidim
