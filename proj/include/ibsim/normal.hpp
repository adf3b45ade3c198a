#pragma once

namespace ibsim {

/// Standard normal CDF via the complementary error function,
/// Phi(x) = erfc(-x / sqrt(2)) / 2, which keeps full relative accuracy in
/// the lower tail where 1 - erf would cancel.
double normal_cdf(double x);

/// Inverse standard normal CDF, Wichura's AS241 (PPND16) rational
/// approximation, relative accuracy about 1e-16. Requires 0 < p < 1.
double normal_quantile(double p);

}  // namespace ibsim
