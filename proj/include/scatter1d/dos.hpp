#pragma once

// Density of scattering states.
//
// rho(k) = L/(2 pi) + delta_rho(k) - (1/2) delta(k). Everything here returns
// the smooth, L-independent part delta_rho(k) for k > 0; the -1/2 weight of
// delta(k) is carried separately as an exact rational and only consumed by
// integrators.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scatter1d/amplitudes.hpp"
#include "scatter1d/errors.hpp"
#include "scatter1d/parallel.hpp"
#include "scatter1d/potentials.hpp"
#include "scatter1d/transfer_matrix.hpp"

namespace scatter1d {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Rational {
  long num = 0;
  long den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Coefficient of delta(k) in rho(k), fixed by R(0) = -1.
inline constexpr Rational kDeltaWeightAtZero{-1, 2};

enum class DensityMethod {
  Closed,    // printed closed forms (Delta, SquareWell)
  Direct,    // normalization integral over the interior wavefunction
  Shortcut,  // -(i/2pi)(R* dR/dk + T* dT/dk)
};

enum class DerivativeMode { Analytic, Numeric };

inline const char* to_string(DensityMethod m) {
  switch (m) {
    case DensityMethod::Closed: return "closed";
    case DensityMethod::Direct: return "direct";
    case DensityMethod::Shortcut: return "shortcut";
  }
  return "?";
}

inline double dos_delta_closed(double k, double kappa) {
  detail::require_positive_k(k);
  return -kappa / (kTwoPi * (kappa * kappa + k * k));
}

// The bracketed closed form for the square well. Its denominator
// -q^4 cos(4 l a) + 8k^4 + 8k^2 q^2 + q^4 is evaluated as
// 8k^4 + 8k^2 q^2 + 2 q^4 sin^2(2 l a) to avoid cancellation at small k.
inline double dos_direct_square_well(double k, const PotentialSpec& spec) {
  detail::require_positive_k(k);
  detail::require_kind(spec, PotentialKind::SquareWell, "dos_direct_square_well");
  const double a = spec.half_range();
  const double q = spec.q();
  const double q2 = q * q;
  const double q4 = q2 * q2;
  const double k2 = k * k;
  const double ell = std::sqrt(k2 + q2);
  const double s = std::sin(2.0 * a * ell);
  const double num = 8.0 * a * k2 * (2.0 * k2 + q2) - 2.0 * q4 * std::sin(4.0 * a * ell) / ell;
  const double den = 8.0 * k2 * k2 + 8.0 * k2 * q2 + 2.0 * q4 * s * s;
  return (-2.0 * a + num / den) / kTwoPi;
}

namespace detail {

// (1/2pi) [ -2a + int |psi_I|^2 - (1/k)(Re R sin 2ka + Im R cos 2ka) ]
inline double assemble_normalization(double k, double a, double interior_norm, complex R) {
  const double phase_term = (R.real() * std::sin(2.0 * k * a) + R.imag() * std::cos(2.0 * k * a)) / k;
  return (-2.0 * a + interior_norm - phase_term) / kTwoPi;
}

}  // namespace detail

/// delta_rho from the norm of the scattering state: the interior integral
/// is analytic (sin/cos pieces for the square well, segment by segment for
/// piecewise potentials); Delta is the a -> 0 limit where only the R term
/// survives.
inline double dos_from_normalization_integral(double k, const PotentialSpec& spec) {
  detail::require_positive_k(k);
  switch (spec.kind()) {
    case PotentialKind::Delta: {
      const auto amp = delta_amplitudes(k, spec.kappa());
      return detail::assemble_normalization(k, 0.0, 0.0, amp.R);
    }
    case PotentialKind::SquareWell: {
      const auto [amp, wave] = square_well_amplitudes(k, spec);
      const double a = spec.half_range();
      const double half = std::sin(2.0 * wave.ell * a) / (2.0 * wave.ell);
      const double norm = std::norm(wave.C) * (a - half) + std::norm(wave.D) * (a + half);
      return detail::assemble_normalization(k, a, norm, amp.R);
    }
    case PotentialKind::PiecewiseConstant: {
      const auto segments = spec.segments();
      const auto t = detail::compose(k, segments, false);
      const auto sol = detail::solve_transfer(k, spec.half_range(), t, false);
      std::array<complex, 2> state = sol.at_left;
      double norm = 0.0;
      for (const auto& seg : segments) {
        const double z = detail::local_z(k, seg);
        norm += detail::segment_norm(z, seg.width(), state[0], state[1]);
        state = detail::segment_matrix(z, seg.width()).apply(state);
      }
      if (!std::isfinite(norm)) throw NumericalError("interior norm overflow; rescale the potential");
      return detail::assemble_normalization(k, spec.half_range(), norm, sol.R);
    }
  }
  throw InvalidArgument("dos_from_normalization_integral: unsupported potential");
}

/// Step used by the numeric derivative: max(1e-4, 1e-3 k).
inline double numeric_derivative_step(double k) { return std::max(1e-4, 1e-3 * k); }

/// Fourth-order central difference with one Richardson step (sixth order).
template <typename F>
auto richardson_derivative(F&& f, double x, double h) {
  auto d4 = [&](double step) {
    return (-f(x + 2.0 * step) + 8.0 * f(x + step) - 8.0 * f(x - step) + f(x - 2.0 * step)) / (12.0 * step);
  };
  return (16.0 * d4(0.5 * h) - d4(h)) / 15.0;
}

inline AmplitudeDerivatives numeric_amplitude_derivatives(double k, const PotentialSpec& spec) {
  const double h = numeric_derivative_step(k);
  if (!(k - 2.0 * h > 0.0))
    throw NumericalError("numeric derivative step underflow near k = 0: need k > " + std::to_string(2.0 * h) +
                         " (use the analytic mode or a larger minimum k)");
  const complex dR = richardson_derivative([&](double x) { return amplitudes(x, spec).R; }, k, h);
  const complex dT = richardson_derivative([&](double x) { return amplitudes(x, spec).T; }, k, h);
  return {dR, dT};
}

struct ShortcutDensity {
  double value = 0.0;            // delta_rho(k)
  double imaginary_residue = 0.0;  // |Im| of the same expression; 0 for a unitary S-matrix
};

inline ShortcutDensity dos_shortcut(double k, const PotentialSpec& spec, DerivativeMode mode) {
  detail::require_positive_k(k);
  const Amplitudes amp = amplitudes(k, spec);
  const AmplitudeDerivatives d =
      mode == DerivativeMode::Analytic ? amplitude_derivatives(k, spec) : numeric_amplitude_derivatives(k, spec);
  const complex sum = std::conj(amp.R) * d.dR + std::conj(amp.T) * d.dT;
  // -(i/2pi) * sum
  const complex rho = complex(0.0, -1.0) * sum / kTwoPi;
  return {rho.real(), std::abs(rho.imag())};
}

inline DensityMethod best_method(const PotentialSpec& spec) {
  return spec.kind() == PotentialKind::PiecewiseConstant ? DensityMethod::Shortcut : DensityMethod::Closed;
}

inline double density_at(double k, const PotentialSpec& spec, DensityMethod method,
                         DerivativeMode mode = DerivativeMode::Analytic) {
  switch (method) {
    case DensityMethod::Closed:
      if (spec.kind() == PotentialKind::Delta) return dos_delta_closed(k, spec.kappa());
      if (spec.kind() == PotentialKind::SquareWell) return dos_direct_square_well(k, spec);
      throw InvalidArgument("no closed-form density for a piecewise potential; use direct or shortcut");
    case DensityMethod::Direct: return dos_from_normalization_integral(k, spec);
    case DensityMethod::Shortcut: return dos_shortcut(k, spec, mode).value;
  }
  throw InvalidArgument("unknown density method");
}

inline double density_at(double k, const PotentialSpec& spec) { return density_at(k, spec, best_method(spec)); }

enum class GridSpacing { Linear, Log, Mixed };

struct GridSpec {
  double k_min = 0.01;
  double k_max = 10.0;
  std::size_t count = 500;
  GridSpacing spacing = GridSpacing::Linear;
};

/// Sorted wavevector samples. Mixed spacing puts 400 log-spaced points per
/// decade below k = 1/scale and `count` linear points above it.
inline std::vector<double> make_grid(const GridSpec& g, double scale = 1.0) {
  if (!(g.k_min > 0.0) || !std::isfinite(g.k_max) || !(g.k_max > g.k_min))
    throw InvalidArgument("grid: need 0 < k_min < k_max");
  if (g.count < 2) throw InvalidArgument("grid: need at least 2 points");
  std::vector<double> k;
  auto linear = [&k](double lo, double hi, std::size_t n, bool skip_first) {
    for (std::size_t i = skip_first ? 1 : 0; i < n; ++i)
      k.push_back(i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  };
  auto logarithmic = [&k](double lo, double hi, std::size_t n) {
    // Interpolate base-10 exponents so decade points come out exact.
    const double e_lo = std::log10(lo);
    const double e_hi = std::log10(hi);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(n - 1);
      k.push_back(i == 0 ? lo : i + 1 == n ? hi : std::pow(10.0, e_lo + (e_hi - e_lo) * t));
    }
  };
  switch (g.spacing) {
    case GridSpacing::Linear: linear(g.k_min, g.k_max, g.count, false); break;
    case GridSpacing::Log: logarithmic(g.k_min, g.k_max, g.count); break;
    case GridSpacing::Mixed: {
      const double knee = 1.0 / scale;
      if (g.k_min >= knee) {
        linear(g.k_min, g.k_max, g.count, false);
        break;
      }
      const double hi = std::min(knee, g.k_max);
      const auto n_log = static_cast<std::size_t>(std::ceil(400.0 * std::log10(hi / g.k_min))) + 1;
      logarithmic(g.k_min, hi, std::max<std::size_t>(n_log, 2));
      if (g.k_max > knee) linear(knee, g.k_max, g.count, true);
      break;
    }
  }
  return k;
}

struct SpectralDensity {
  std::vector<double> grid;
  std::vector<double> delta_rho;
  Rational delta_weight_at_zero = kDeltaWeightAtZero;
  DensityMethod method = DensityMethod::Closed;
  double length_scale = 1.0;  // a, or 1/|kappa| for Delta
};

inline SpectralDensity sample_density(const PotentialSpec& spec, const GridSpec& grid_spec,
                                      std::optional<DensityMethod> method = std::nullopt,
                                      DerivativeMode mode = DerivativeMode::Analytic) {
  SpectralDensity out;
  out.method = method.value_or(best_method(spec));
  out.length_scale = spec.length_scale();
  out.grid = make_grid(grid_spec, out.length_scale);
  out.delta_rho.assign(out.grid.size(), 0.0);
  parallel_for(out.grid.size(),
               [&](std::size_t i) { out.delta_rho[i] = density_at(out.grid[i], spec, out.method, mode); });
  return out;
}

struct TailFit {
  double coefficient = 0.0;  // c in delta_rho ~ c/k^2
  double subleading = 0.0;   // d in delta_rho ~ c/k^2 + d/k^4
  double k_lo = 0.0;
  double k_hi = 0.0;
  std::size_t points = 0;
};

/// Weighted least squares of k^2 delta_rho = c + d/k^2 over k in
/// [k_hi/10, k_hi]. The d/k^4 term absorbs the next smooth order. What is
/// left is oscillatory (cos(4al)/k^2 for a well) with amplitude ~ 1/k^2, so
/// each sample is weighted by k^4; unweighted, a deep well biases c by ~1%.
inline TailFit fit_tail(std::span<const double> k, std::span<const double> delta_rho) {
  if (k.empty() || k.size() != delta_rho.size()) throw InvalidArgument("tail fit: mismatched samples");
  const double k_hi = k.back();
  const double k_lo = 0.1 * k_hi;
  double s00 = 0, s01 = 0, s11 = 0, b0 = 0, b1 = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] < k_lo) continue;
    const double y = k[i] * k[i] * delta_rho[i];
    const double u = 1.0 / (k[i] * k[i]);
    const double r = k[i] / k_hi;
    const double w = r * r * r * r;
    s00 += w;
    s01 += w * u;
    s11 += w * u * u;
    b0 += w * y;
    b1 += w * y * u;
    ++n;
  }
  if (n < 3) throw InvalidArgument("tail fit: fewer than 3 samples in the top decade of the grid");
  const double det = s00 * s11 - s01 * s01;
  if (!(std::abs(det) > 1e-300)) throw NumericalError("tail fit: singular normal equations");
  TailFit fit;
  fit.coefficient = (b0 * s11 - b1 * s01) / det;
  fit.subleading = (s00 * b1 - s01 * b0) / det;
  fit.k_lo = k_lo;
  fit.k_hi = k_hi;
  fit.points = n;
  return fit;
}

/// Grid must reach k_max >= 50 / length_scale.
inline TailFit fit_tail(const SpectralDensity& density) {
  if (density.grid.empty() || density.grid.back() * density.length_scale < 50.0)
    throw InvalidArgument("tail fit: grid must extend to k >= 50/a (50 kappa for Delta)");
  return fit_tail(density.grid, density.delta_rho);
}

inline double tail_coefficient(const SpectralDensity& density) { return fit_tail(density).coefficient; }

}  // namespace scatter1d
