#pragma once

// Binomial-sum identities behind the uniform-simplex moment formulas:
//   sum_{k=0}^{n} (-1)^k C(n,k) / (k+1)       = 1/(n+1)
//   sum_{k=0}^{n} (-1)^k C(n,k) / (k+1)^2     = H_{n+1} / (n+1)
//   sum_{k=0}^{n} (-1)^k C(n,k) / (k+1-lambda) = n! / prod_{k=1}^{n+1} (k - lambda)
//   sum_{k=1}^{T} (-1)^k C(T,k) k^j           = 0        (1 <= j <= T-1)
//   sum_{j=1}^{T-1} C(T-1,j) (-1)^j / j       = -H_{T-1}
// Each *_residual returns |LHS - RHS|; the Rational overloads are exact.

#include "phidim/rational.hpp"

namespace phidim {

Rational melzak_reciprocal_residual(int n);
Rational melzak_reciprocal_square_residual(int n);
/// Throws DomainError when lambda is one of the poles 1, ..., n+1.
Rational melzak_shifted_residual(int n, const Rational& lambda);
Rational euler_difference_residual(int T, int j);
Rational harmonic_alternating_residual(int T);

/// Floating-point evaluation of the three Melzak forms at real lambda;
/// returns the largest residual. Throws DomainError at a pole.
double melzak_identity_check(int n, double lambda);

}  // namespace phidim
