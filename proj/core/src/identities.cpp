#include "phidim/identities.hpp"

#include <boost/math/special_functions/binomial.hpp>
#include <algorithm>
#include <cmath>

#include "phidim/errors.hpp"

namespace phidim {

namespace {

BigInt binomial(int n, int k) {
  BigInt c = 1;
  for (int i = 1; i <= k; ++i) {
    c *= n - k + i;
    c /= i;
  }
  return c;
}

Rational harmonic(int n) {
  Rational h = 0;
  for (int k = 1; k <= n; ++k) h += Rational(1, k);
  return h;
}

Rational abs_diff(const Rational& a, const Rational& b) {
  Rational d = a - b;
  return d < 0 ? Rational(-d) : d;
}

void require_nonneg(int n, const char* who) {
  if (n < 0) throw DomainError(std::string(who) + ": n must be >= 0");
}

}  // namespace

Rational melzak_reciprocal_residual(int n) {
  require_nonneg(n, "melzak_reciprocal_residual");
  Rational lhs = 0;
  for (int k = 0; k <= n; ++k) {
    const Rational term = Rational(binomial(n, k)) / (k + 1);
    lhs += (k % 2 == 0) ? term : Rational(-term);
  }
  return abs_diff(lhs, Rational(1, n + 1));
}

Rational melzak_reciprocal_square_residual(int n) {
  require_nonneg(n, "melzak_reciprocal_square_residual");
  Rational lhs = 0;
  for (int k = 0; k <= n; ++k) {
    const Rational term = Rational(binomial(n, k)) / ((k + 1) * (k + 1));
    lhs += (k % 2 == 0) ? term : Rational(-term);
  }
  return abs_diff(lhs, harmonic(n + 1) / (n + 1));
}

Rational melzak_shifted_residual(int n, const Rational& lambda) {
  require_nonneg(n, "melzak_shifted_residual");
  for (int k = 1; k <= n + 1; ++k) {
    if (lambda == k) throw DomainError("melzak_shifted_residual: lambda is a pole");
  }
  Rational lhs = 0;
  for (int k = 0; k <= n; ++k) {
    const Rational term = Rational(binomial(n, k)) / (Rational(k + 1) - lambda);
    lhs += (k % 2 == 0) ? term : Rational(-term);
  }
  Rational rhs = 1;
  for (int k = 1; k <= n; ++k) rhs *= k;
  for (int k = 1; k <= n + 1; ++k) rhs /= (Rational(k) - lambda);
  return abs_diff(lhs, rhs);
}

Rational euler_difference_residual(int T, int j) {
  if (T < 1 || j < 0) throw DomainError("euler_difference_residual: needs T >= 1, j >= 0");
  BigInt lhs = 0;
  for (int k = 1; k <= T; ++k) {
    BigInt term = binomial(T, k) * boost::multiprecision::pow(BigInt(k), static_cast<unsigned>(j));
    lhs += (k % 2 == 0) ? term : BigInt(-term);
  }
  return Rational(lhs < 0 ? BigInt(-lhs) : lhs);
}

Rational harmonic_alternating_residual(int T) {
  if (T < 1) throw DomainError("harmonic_alternating_residual: needs T >= 1");
  Rational lhs = 0;
  for (int j = 1; j <= T - 1; ++j) {
    const Rational term = Rational(binomial(T - 1, j)) / j;
    lhs += (j % 2 == 0) ? term : Rational(-term);
  }
  return abs_diff(lhs, Rational(-harmonic(T - 1)));
}

double melzak_identity_check(int n, double lambda) {
  require_nonneg(n, "melzak_identity_check");
  for (int k = 1; k <= n + 1; ++k) {
    if (lambda == k) throw DomainError("melzak_identity_check: lambda is a pole");
  }
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, h = 0.0, rhs3 = 1.0;
  for (int k = 0; k <= n; ++k) {
    const double c = boost::math::binomial_coefficient<double>(n, k);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    s1 += sign * c / (k + 1);
    s2 += sign * c / ((k + 1.0) * (k + 1.0));
    s3 += sign * c / (k + 1.0 - lambda);
    h += 1.0 / (k + 1);
    if (k >= 1) rhs3 *= k;
  }
  for (int k = 1; k <= n + 1; ++k) rhs3 /= (k - lambda);
  const double r1 = std::abs(s1 - 1.0 / (n + 1));
  const double r2 = std::abs(s2 - h / (n + 1));
  const double r3 = std::abs(s3 - rhs3);
  return std::max({r1, r2, r3});
}

}  // namespace phidim
