#include "phidim/rational.hpp"

#include <cmath>

#include "phidim/errors.hpp"

namespace phidim {

Rational exact_rational(double v) {
  if (!std::isfinite(v)) throw DomainError("exact_rational: non-finite value");
  int exponent = 0;
  const double mantissa = std::frexp(v, &exponent);
  // mantissa * 2^53 is an integer for every finite double
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  Rational q = Rational(BigInt(scaled));
  const int shift = exponent - 53;
  if (shift >= 0) {
    q *= Rational(BigInt(1) << shift);
  } else {
    q /= Rational(BigInt(1) << -shift);
  }
  return q;
}

std::string to_string(const Rational& q) {
  const auto num = boost::multiprecision::numerator(q);
  const auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace phidim
