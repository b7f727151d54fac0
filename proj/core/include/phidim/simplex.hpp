#pragma once

// Order statistics of a point drawn uniformly from the probability simplex S_T.

namespace phidim {

/// E(-log max p) = sum_{j=1}^{T} (-1)^{j+1} C(T,j) log j + H_{T-1}.
/// The alternating sum is accumulated in 200-digit binary floating point;
/// supported for 2 <= T <= 400.
double closed_form_ex(int T);

/// E(-log min p) = log T + H_{T-1}.
double closed_form_ey(int T);

/// P(min p <= z) = 1 - (1 - T z)^{T-1} on [0, 1/T]; 0 below, 1 above.
double min_cdf(int T, double z);

/// Density of min p: T (T-1) (1 - T z)^{T-2} on [0, 1/T].
double min_density(int T, double z);

/// P(max p <= z) = 1 + sum_{k=1}^{T} (-1)^k C(T,k) (1 - k z)_+^{T-1},
/// clamped to [0,1]; 0 for z < 1/T and 1 for z >= 1.
double max_cdf(int T, double z);

}  // namespace phidim
