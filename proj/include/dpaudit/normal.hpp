#pragma once

namespace dpaudit {

// Standard normal distribution function.
double std_normal_cdf(double x);

// Standard normal quantile. Rational approximation refined by one Halley
// step against the erfc-based CDF; absolute error well below 1e-8.
double std_normal_quantile(double p);

}  // namespace dpaudit
