#include "dpaudit/kernel.hpp"
#include "dpaudit/normal.hpp"
#include "dpaudit/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace dpaudit {

namespace {
constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // 1/sqrt(2*pi)
}

double kernel_eval(const Kernel& kernel, std::span<const double> u) {
  if (static_cast<int>(u.size()) != kernel.dim)
    throw std::invalid_argument("kernel_eval: dimension mismatch");
  double q = 0.0;
  for (double ui : u) q += ui * ui;
  double norm = 1.0;
  for (int i = 0; i < kernel.dim; ++i) norm *= kInvSqrt2Pi;
  return norm * std::exp(-0.5 * q);
}

double kernel_eval(const Kernel& kernel, double u) {
  return kernel_eval(kernel, std::span<const double>(&u, 1));
}

double kernel_l2_norm(const Kernel& kernel) {
  // product structure: (1/(2 sqrt(pi)))^d
  const double one_dim = 0.5 / std::sqrt(M_PI);
  double out = 1.0;
  for (int i = 0; i < kernel.dim; ++i) out *= one_dim;
  return out;
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

namespace {

// Acklam's rational approximation, |error| < 1.2e-9 before refinement.
double quantile_acklam(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("std_normal_quantile: p must lie in (0,1)");
  double x = quantile_acklam(p);
  // One Halley step against the erfc CDF.
  const double e = std_normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

double laplace_inverse_cdf(double scale, double u) {
  if (!(scale > 0.0)) throw std::invalid_argument("laplace: scale must be positive");
  const double v = u - 0.5;
  const double s = v < 0.0 ? -1.0 : (v > 0.0 ? 1.0 : 0.0);
  return -scale * s * std::log1p(-2.0 * std::fabs(v));
}

double sample_laplace(double scale, Rng& rng) {
  return laplace_inverse_cdf(scale, rng.uniform());
}

}  // namespace dpaudit
