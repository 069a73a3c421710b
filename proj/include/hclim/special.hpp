#pragma once

namespace hclim {

/// Inverse of the standard normal CDF (Wichura's AS 241, PPND16); relative
/// accuracy about 1e-16 over (0, 1).
double normal_quantile(double p);

double normal_cdf(double x);

double digamma(double x);
double trigamma(double x);

}  // namespace hclim
