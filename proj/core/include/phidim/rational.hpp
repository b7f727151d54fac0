#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <string>

namespace phidim {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/// Exact value of a finite double.
Rational exact_rational(double v);

/// "p/q" (or "p" when q = 1).
std::string to_string(const Rational& q);

}  // namespace phidim
