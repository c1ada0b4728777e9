#pragma once

// Bound-state counting from the loss spectrum:
//
//   N_b = integral over all k of (L/2pi - rho(k))
//       = -2 * int_0^inf delta_rho(k) dk + 1/2
//
// where the 1/2 is the delta(k) weight and the factor 2 folds k < 0 onto k > 0.

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "scatter1d/dos.hpp"
#include "scatter1d/errors.hpp"
#include "scatter1d/parallel.hpp"
#include "scatter1d/potentials.hpp"
#include "scatter1d/quadrature.hpp"

namespace scatter1d {

struct LevinsonOptions {
  double cutoff_scale = 200.0;  // K * length_scale
  double k_min_scale = 1e-6;    // lower quadrature limit * length_scale
  double abs_tol = 1e-8;
  std::optional<DensityMethod> method;  // default: best_method(spec)
};

struct QuadratureDiagnostics {
  double cutoff = 0.0;           // K
  double tail_correction = 0.0;  // contribution of k > K to n_b
  double error_estimate = 0.0;
  TailFit tail;
};

struct BoundStateReport {
  double n_b_integrated = 0.0;
  std::optional<int> n_b_analytic;
  std::optional<double> residual;
  QuadratureDiagnostics diagnostics;
};

/// 1 + floor(2 qa / pi) for the square well; 1 (0) for an attractive
/// (repulsive) delta. Piecewise potentials have no closed form.
inline int analytic_bound_count(const PotentialSpec& spec) {
  switch (spec.kind()) {
    case PotentialKind::Delta: return spec.kappa() > 0.0 ? 1 : 0;
    case PotentialKind::SquareWell: return 1 + static_cast<int>(std::floor(2.0 * spec.qa() / std::numbers::pi));
    case PotentialKind::PiecewiseConstant:
      throw InvalidArgument("analytic bound-state count is unavailable for piecewise potentials; "
                            "use count_bound_states or the box oracle");
  }
  throw InvalidArgument("unknown potential kind");
}

namespace detail {

inline std::vector<double> decade_breakpoints(double lo, double hi, double scale) {
  std::vector<double> pts{lo};
  for (double p = 1e-5; p < 1e6; p *= 10.0) {
    const double b = p / scale;
    if (b > lo && b < hi) pts.push_back(b);
  }
  pts.push_back(hi);
  return pts;
}

}  // namespace detail

/// int_0^k delta_rho(k') dk' by adaptive quadrature from k_min, with the
/// (finite) integrand held constant on [0, k_min].
inline QuadratureResult cumulative_density(const PotentialSpec& spec, double k, const LevinsonOptions& opt = {}) {
  if (!(k > 0.0)) return {};
  const double scale = spec.length_scale();
  const DensityMethod method = opt.method.value_or(best_method(spec));
  auto f = [&](double x) { return density_at(x, spec, method); };
  const double k_min = std::min(opt.k_min_scale / scale, 0.5 * k);
  const auto pts = detail::decade_breakpoints(k_min, k, scale);
  QuadratureResult r = integrate(f, pts, opt.abs_tol);
  r.value += f(k_min) * k_min;
  return r;
}

inline BoundStateReport count_bound_states(const PotentialSpec& spec, const LevinsonOptions& opt = {}) {
  const double scale = spec.length_scale();
  const double cutoff = opt.cutoff_scale / scale;
  if (opt.cutoff_scale < 200.0) throw InvalidArgument("Levinson count: cutoff K must satisfy K*a >= 200");
  const DensityMethod method = opt.method.value_or(best_method(spec));

  const QuadratureResult body = cumulative_density(spec, cutoff, opt);

  constexpr std::size_t tail_samples = 257;
  std::vector<double> tk(tail_samples), trho(tail_samples);
  for (std::size_t i = 0; i < tail_samples; ++i) {
    tk[i] = cutoff * (0.1 + 0.9 * static_cast<double>(i) / static_cast<double>(tail_samples - 1));
    trho[i] = density_at(tk[i], spec, method);
  }
  const TailFit tail = fit_tail(tk, trho);
  // int_K^inf (c/k^2 + d/k^4) dk
  const double tail_integral = tail.coefficient / cutoff + tail.subleading / (3.0 * cutoff * cutoff * cutoff);

  BoundStateReport report;
  report.n_b_integrated = -2.0 * (body.value + tail_integral) - kDeltaWeightAtZero.value();
  report.diagnostics = {cutoff, -2.0 * tail_integral, 2.0 * body.error, tail};
  if (spec.kind() != PotentialKind::PiecewiseConstant) {
    report.n_b_analytic = analytic_bound_count(spec);
    report.residual = std::abs(report.n_b_integrated - *report.n_b_analytic);
  }
  return report;
}

/// Same count from a sampled density: trapezoid rule on the grid, the first
/// sample held constant down to k = 0, and the fitted 1/k^2 tail beyond.
inline BoundStateReport count_bound_states(const SpectralDensity& density) {
  const auto& k = density.grid;
  const auto& rho = density.delta_rho;
  if (k.size() < 2 || k.back() * density.length_scale < 200.0)
    throw InvalidArgument("Levinson count: density grid must reach K*a >= 200");
  double body = rho.front() * k.front();
  for (std::size_t i = 1; i < k.size(); ++i) body += 0.5 * (rho[i] + rho[i - 1]) * (k[i] - k[i - 1]);
  const TailFit tail = fit_tail(density);
  const double cutoff = k.back();
  const double tail_integral = tail.coefficient / cutoff + tail.subleading / (3.0 * cutoff * cutoff * cutoff);

  BoundStateReport report;
  report.n_b_integrated = -2.0 * (body + tail_integral) - density.delta_weight_at_zero.value();
  report.diagnostics = {cutoff, -2.0 * tail_integral, 0.0, tail};
  return report;
}

/// Moves qa to the nearest point at least `margin` away from every
/// threshold n*pi/2, staying on the same side (above, when exactly on it).
inline double nudge_from_threshold(double qa, double margin = 1e-3) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  const double n = std::max(1.0, std::round(qa / half_pi));
  const double t = n * half_pi;
  if (std::abs(qa - t) >= margin) return qa;
  return qa < t ? t - margin : t + margin;
}

/// min, min+step, ... up to max (inclusive within step/1000).
inline std::vector<double> sweep_values(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw InvalidArgument("sweep: need min <= max and step > 0");
  std::vector<double> v;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-3));
  for (std::size_t i = 0; i <= n; ++i) v.push_back(lo + step * static_cast<double>(i));
  return v;
}

struct StaircasePoint {
  double qa_requested = 0.0;
  double qa = 0.0;  // after threshold nudging
  BoundStateReport report;
};

/// Bound-state count of a square well (half-width a) against qa.
inline std::vector<StaircasePoint> staircase_sweep(const std::vector<double>& qa_values, double a = 1.0,
                                                   const LevinsonOptions& opt = {}) {
  std::vector<StaircasePoint> out(qa_values.size());
  parallel_for(qa_values.size(), [&](std::size_t i) {
    out[i].qa_requested = qa_values[i];
    out[i].qa = nudge_from_threshold(qa_values[i]);
    out[i].report = count_bound_states(make_square_well(out[i].qa, a), opt);
  });
  return out;
}

}  // namespace scatter1d
