#include "phidim/simplex.hpp"

#include <algorithm>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

#include "phidim/errors.hpp"

namespace phidim {

namespace {

namespace mp = boost::multiprecision;
using Wide = mp::number<mp::cpp_bin_float<200>>;

constexpr int kMaxWideT = 400;
constexpr int kMaxDoubleT = 20;

mp::cpp_int binomial(int n, int k) {
  mp::cpp_int c = 1;
  for (int i = 1; i <= k; ++i) {
    c *= n - k + i;
    c /= i;
  }
  return c;
}

void require_t(int T, const char* who) {
  if (T < 2) throw DomainError(std::string(who) + ": T must be >= 2");
}

double harmonic(int n) {
  double h = 0.0;
  for (int j = n; j >= 1; --j) h += 1.0 / j;
  return h;
}

}  // namespace

double closed_form_ex(int T) {
  require_t(T, "closed_form_ex");
  if (T > kMaxWideT) throw DomainError("closed_form_ex: T above supported range (400)");
  Wide acc = 0;
  for (int j = 2; j <= T; ++j) {  // j = 1 contributes log 1 = 0
    Wide term = Wide(binomial(T, j)) * mp::log(Wide(j));
    if (j % 2 == 0) {
      acc -= term;
    } else {
      acc += term;
    }
  }
  return acc.convert_to<double>() + harmonic(T - 1);
}

double closed_form_ey(int T) {
  require_t(T, "closed_form_ey");
  return std::log(static_cast<double>(T)) + harmonic(T - 1);
}

double min_cdf(int T, double z) {
  require_t(T, "min_cdf");
  if (z <= 0.0) return 0.0;
  const double base = 1.0 - T * z;
  if (base <= 0.0) return 1.0;
  return 1.0 - std::pow(base, T - 1);
}

double min_density(int T, double z) {
  require_t(T, "min_density");
  if (z < 0.0 || T * z > 1.0) return 0.0;
  return static_cast<double>(T) * (T - 1) * std::pow(1.0 - T * z, T - 2);
}

double max_cdf(int T, double z) {
  require_t(T, "max_cdf");
  if (T * z < 1.0) return 0.0;
  if (z >= 1.0) return 1.0;
  double value = 0.0;
  if (T <= kMaxDoubleT) {
    value = 1.0;
    for (int k = 1; k <= T; ++k) {
      const double base = 1.0 - k * z;
      if (base <= 0.0) break;  // (1 - k z)_+ vanishes for every larger k too
      const double term = boost::math::binomial_coefficient<double>(T, k) * std::pow(base, T - 1);
      value += (k % 2 == 0) ? term : -term;
    }
  } else {
    if (T > kMaxWideT) throw DomainError("max_cdf: T above supported range (400)");
    Wide acc = 1;
    const Wide zw = z;
    for (int k = 1; k <= T; ++k) {
      const Wide base = 1 - k * zw;
      if (base <= 0) break;
      const Wide term = Wide(binomial(T, k)) * mp::pow(base, T - 1);
      if (k % 2 == 0) {
        acc += term;
      } else {
        acc -= term;
      }
    }
    value = acc.convert_to<double>();
  }
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace phidim
