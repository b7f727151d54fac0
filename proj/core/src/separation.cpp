#include "phidim/separation.hpp"

#include <cmath>

#include "phidim/errors.hpp"

namespace phidim {

double feasible_ratio_bound(int t, double tau) {
  if (t < 2) throw DomainError("feasible_ratio_bound needs t >= 2");
  if (!(tau >= 0.0 && tau < 1.0)) throw DomainError("feasible_ratio_bound needs tau in [0,1)");
  return 1.0 / (t + tau * (t - 1));
}

int gap_constant(double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw DomainError("gap_constant needs tau in (0,1]");
  const double half = tau / 2.0;
  int level = 0;
  while (std::ldexp(1.0, -level) > half) ++level;
  return level;
}

}  // namespace phidim
