#pragma once

// Error function, self-contained. Positive-term series
//   erf(x) = (2/sqrt(pi)) e^{-x^2} sum_n 2^n x^{2n+1} / (2n+1)!!
// for |x| <= 3, the Laplace continued fraction for erfc beyond. erfc and
// erfcx use the continued fraction from x = 0.5 up.

#include <cmath>
#include <limits>
#include <numbers>

namespace scatter1d::special {

namespace detail {

inline constexpr double kSwitch = 3.0;
// The complement switches earlier: 1 - erf loses digits well before x = 3.
inline constexpr double kComplementSwitch = 0.5;

// Valid for x >= 0 (all terms positive).
inline double erf_series(double x) {
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int n = 1; n < 500; ++n) {
    term *= 2.0 * x2 / (2.0 * n + 1.0);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return 2.0 * std::numbers::inv_sqrtpi * std::exp(-x2) * sum;
}

// e^{x^2} erfc(x) for x > 0 via modified Lentz on
//   x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))
inline double erfcx_fraction(double x) {
  constexpr double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int n = 1; n < 5000; ++n) {
    const double an = 0.5 * n;
    d = x + an * d;
    if (d == 0.0) d = tiny;
    c = x + an / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::numbers::inv_sqrtpi / f;
}

}  // namespace detail

inline double erf(double x) {
  if (std::isnan(x)) return x;
  const double ax = std::abs(x);
  if (ax <= detail::kSwitch) return std::copysign(detail::erf_series(ax), x);
  if (ax > 27.0) return std::copysign(1.0, x);
  const double erfc = std::exp(-ax * ax) * detail::erfcx_fraction(ax);
  return std::copysign(1.0 - erfc, x);
}

inline double erfc(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return 2.0 - erfc(-x);
  if (x <= detail::kComplementSwitch) return 1.0 - detail::erf_series(x);
  return std::exp(-x * x) * detail::erfcx_fraction(x);
}

/// Scaled complement e^{x^2} erfc(x); finite for all x >= 0.
inline double erfcx(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return 2.0 * std::exp(x * x) - erfcx(-x);
  if (x <= detail::kComplementSwitch) return std::exp(x * x) * (1.0 - detail::erf_series(x));
  return detail::erfcx_fraction(x);
}

}  // namespace scatter1d::special
