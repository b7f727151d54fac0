#pragma once

namespace phidim {

/// Largest ratio r for which [0,1] holds t tau-separated r-similarities:
/// 1 / (t + tau (t - 1)).
double feasible_ratio_bound(int t, double tau);

/// Smallest integer L with 2^{-L} <= tau / 2.
int gap_constant(double tau);

}  // namespace phidim
