#pragma once

// Regularised incomplete gamma functions and the normal CDF, as used by the
// randomness tests' reference distributions.

#include <cmath>
#include <limits>

namespace lwcga::stats {

namespace detail {

// P(a, x) by its power series; good for x < a + 1.
inline double igam_series(double a, double x) {
  double ap = a, sum = 1.0 / a, del = sum;
  for (int n = 0; n < 1'000'000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by Lentz's continued fraction; good for x >= a + 1.
inline double igamc_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 1'000'000; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

/// Regularised upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
inline double igamc(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - detail::igam_series(a, x);
  return detail::igamc_fraction(a, x);
}

/// Regularised lower incomplete gamma P(a, x).
inline double igam(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return detail::igam_series(a, x);
  return 1.0 - detail::igamc_fraction(a, x);
}

/// Standard normal CDF.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace lwcga::stats
