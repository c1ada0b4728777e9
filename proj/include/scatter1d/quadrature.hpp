#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "scatter1d/errors.hpp"

namespace scatter1d {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // summed |Kronrod - Gauss| over the final intervals
};

namespace detail {

struct QuadInterval {
  double lo, hi, value, error, l1;
  bool operator<(const QuadInterval& o) const { return error < o.error; }
};

// One 7/15-point Gauss-Kronrod panel. Nodes and weights come from boost;
// boost's own recursive driver in this version mis-scales its error
// estimate on short intervals, so the adaptivity lives in integrate() below.
template <typename F>
QuadInterval gauss_kronrod_panel(F& f, double lo, double hi) {
  using kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  using gauss = boost::math::quadrature::gauss<double, 7>;
  const auto& x = kronrod::abscissa();
  const auto& wk = kronrod::weights();
  const auto& wg = gauss::weights();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  const double f0 = f(mid);
  double k = f0 * wk[0];
  double g = f0 * wg[0];
  double l1 = std::abs(f0) * wk[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fp = f(mid + half * x[i]);
    const double fm = f(mid - half * x[i]);
    k += (fp + fm) * wk[i];
    l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
    if (i % 2 == 0) g += (fp + fm) * wg[i / 2];
  }
  return {lo, hi, k * half, std::abs(k - g) * half, l1 * half};
}

inline std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace detail

/// Globally adaptive 15-point Gauss-Kronrod over consecutive breakpoints:
/// the interval with the largest error is bisected until the summed error
/// is below abs_tol (or at the rounding floor of the integrand). Running
/// out of subdivisions raises NumericalError.
template <typename F>
QuadratureResult integrate(F&& f, std::span<const double> breakpoints, double abs_tol, std::size_t max_intervals = 4000) {
  QuadratureResult total;
  if (breakpoints.size() < 2) return total;
  std::priority_queue<detail::QuadInterval> heap;
  double value = 0.0, error = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i])) continue;
    const auto p = detail::gauss_kronrod_panel(f, breakpoints[i], breakpoints[i + 1]);
    value += p.value;
    error += p.error;
    l1 += p.l1;
    heap.push(p);
  }
  const double floor = 50.0 * std::numeric_limits<double>::epsilon();
  while (!heap.empty() && error > abs_tol && error > floor * l1) {
    if (heap.size() >= max_intervals)
      throw NumericalError("quadrature did not converge on [" + detail::short_number(breakpoints.front()) + ", " +
                           detail::short_number(breakpoints.back()) + "], error estimate " +
                           detail::short_number(error) + " > " + detail::short_number(abs_tol));
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const auto left = detail::gauss_kronrod_panel(f, worst.lo, mid);
    const auto right = detail::gauss_kronrod_panel(f, mid, worst.hi);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
  }
  if (!std::isfinite(value)) throw NumericalError("quadrature produced a non-finite value");
  // Re-sum from the final intervals to avoid drift in the running totals.
  total.value = 0.0;
  total.error = 0.0;
  while (!heap.empty()) {
    total.value += heap.top().value;
    total.error += heap.top().error;
    heap.pop();
  }
  return total;
}

template <typename F>
QuadratureResult integrate(F&& f, double lo, double hi, double abs_tol) {
  const double pts[] = {lo, hi};
  return integrate(std::forward<F>(f), std::span<const double>(pts), abs_tol);
}

}  // namespace scatter1d
