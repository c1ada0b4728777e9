#pragma once

// Reflection and transmission amplitudes for a right-moving wave,
//
//   psi_k(x) = e^{ikx} + R(k) e^{-ikx}   for x < -a
//   psi_k(x) = T(k) e^{ikx}              for x >  a
//
// Only k > 0 is computed; the density layer relies on N(k) = N(-k).

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "scatter1d/errors.hpp"
#include "scatter1d/potentials.hpp"
#include "scatter1d/transfer_matrix.hpp"

namespace scatter1d {

using complex = std::complex<double>;

struct Amplitudes {
  double k = 0.0;
  complex R;
  complex T;

  /// |R|^2 + |T|^2, which is 1 for a unitary S-matrix.
  double unitarity() const { return std::norm(R) + std::norm(T); }
};

struct AmplitudeDerivatives {
  complex dR;  // dR/dk
  complex dT;  // dT/dk
};

/// Square-well interior wavefunction psi_I(x) = C sin(l x) + D cos(l x).
struct InteriorWave {
  complex C;
  complex D;
  double ell = 0.0;  // sqrt(k^2 + q^2)

  complex operator()(double x) const { return C * std::sin(ell * x) + D * std::cos(ell * x); }
};

struct SquareWellScattering {
  Amplitudes amplitudes;
  InteriorWave interior;
};

namespace detail {

inline void require_positive_k(double k) {
  if (!std::isfinite(k) || !(k > 0.0))
    throw InvalidArgument("wavevector must be finite and > 0 (negative k follows from N(k) = N(-k))");
}

inline void require_kind(const PotentialSpec& spec, PotentialKind kind, const char* op) {
  if (spec.kind() != kind)
    throw InvalidArgument(std::string(op) + " needs a " + to_string(kind) + " potential, got " +
                          to_string(spec.kind()));
}

}  // namespace detail

// R = -1 / (ik/kappa + 1); continuity of psi at the origin forces T = 1 + R.
inline Amplitudes delta_amplitudes(double k, double kappa) {
  detail::require_positive_k(k);
  if (!std::isfinite(kappa) || kappa == 0.0) throw InvalidArgument("delta amplitudes: kappa must be finite and nonzero");
  const complex denom(1.0, k / kappa);
  return {k, -1.0 / denom, complex(0.0, k / kappa) / denom};
}

inline AmplitudeDerivatives delta_amplitude_derivatives(double k, double kappa) {
  detail::require_positive_k(k);
  const complex denom(kappa, k);
  const complex d = complex(0.0, kappa) / (denom * denom);
  return {d, d};
}

inline SquareWellScattering square_well_amplitudes(double k, const PotentialSpec& spec) {
  detail::require_positive_k(k);
  detail::require_kind(spec, PotentialKind::SquareWell, "square_well_amplitudes");
  const complex i(0.0, 1.0);
  const double a = spec.half_range();
  const double q = spec.q();
  const double ell = std::sqrt(k * k + q * q);
  const double s2 = std::sin(2.0 * ell * a);
  const double c2 = std::cos(2.0 * ell * a);

  const complex T = std::exp(complex(0.0, -2.0 * k * a)) / (c2 - i * (k * k + ell * ell) / (2.0 * k * ell) * s2);
  const complex R = i * s2 * (q * q) / (2.0 * k * ell) * T;

  const double sa = std::sin(ell * a);
  const double ca = std::cos(ell * a);
  const complex eika = std::exp(complex(0.0, k * a));
  const complex C = (sa + i * (k / ell) * ca) * eika * T;
  const complex D = (ca - i * (k / ell) * sa) * eika * T;
  return {{k, R, T}, {C, D, ell}};
}

// Closed-form dR/dk, dT/dk for the square well.
inline AmplitudeDerivatives square_well_amplitude_derivatives(double k, const PotentialSpec& spec) {
  const auto [amp, interior] = square_well_amplitudes(k, spec);
  const complex i(0.0, 1.0);
  const double a = spec.half_range();
  const double q = spec.q();
  const double q2 = q * q;
  const double ell = interior.ell;
  const double dell = k / ell;
  const double s2 = std::sin(2.0 * ell * a);
  const double c2 = std::cos(2.0 * ell * a);

  const double g = (2.0 * k * k + q2) / (2.0 * k * ell);
  const double dg =
      (4.0 * k * 2.0 * k * ell - (2.0 * k * k + q2) * 2.0 * (ell * ell + k * k) / ell) / (4.0 * k * k * ell * ell);
  const complex denom = c2 - i * g * s2;
  const complex ddenom = -2.0 * a * s2 * dell - i * (dg * s2 + g * 2.0 * a * c2 * dell);
  const complex dT = amp.T * (complex(0.0, -2.0 * a) - ddenom / denom);

  const double h = q2 / (2.0 * k * ell);
  const double dh = -q2 * (ell * ell + k * k) / (2.0 * k * k * ell * ell * ell);
  const complex dR = i * (dh * s2 * amp.T + h * 2.0 * a * c2 * dell * amp.T + h * s2 * dT);
  return {dR, dT};
}

/// Amplitudes from the composed 2x2 transfer matrix of the segments.
inline Amplitudes piecewise_amplitudes(double k, const PotentialSpec& spec) {
  detail::require_positive_k(k);
  detail::require_kind(spec, PotentialKind::PiecewiseConstant, "piecewise_amplitudes");
  const auto t = detail::compose(k, spec.segments(), false);
  const auto sol = detail::solve_transfer(k, spec.half_range(), t, false);
  return {k, sol.R, sol.T};
}

inline AmplitudeDerivatives piecewise_amplitude_derivatives(double k, const PotentialSpec& spec) {
  detail::require_positive_k(k);
  detail::require_kind(spec, PotentialKind::PiecewiseConstant, "piecewise_amplitude_derivatives");
  const auto t = detail::compose(k, spec.segments(), true);
  const auto sol = detail::solve_transfer(k, spec.half_range(), t, true);
  return {sol.dR, sol.dT};
}

inline Amplitudes amplitudes(double k, const PotentialSpec& spec) {
  switch (spec.kind()) {
    case PotentialKind::Delta: return delta_amplitudes(k, spec.kappa());
    case PotentialKind::SquareWell: return square_well_amplitudes(k, spec).amplitudes;
    case PotentialKind::PiecewiseConstant: return piecewise_amplitudes(k, spec);
  }
  throw InvalidArgument("unknown potential kind");
}

inline AmplitudeDerivatives amplitude_derivatives(double k, const PotentialSpec& spec) {
  switch (spec.kind()) {
    case PotentialKind::Delta: return delta_amplitude_derivatives(k, spec.kappa());
    case PotentialKind::SquareWell: return square_well_amplitude_derivatives(k, spec);
    case PotentialKind::PiecewiseConstant: return piecewise_amplitude_derivatives(k, spec);
  }
  throw InvalidArgument("unknown potential kind");
}

/// The asymptotic wavefunction at one exterior point, written three ways:
/// the left/right form, the s-wave + p-wave form with sgn(x), and the sum
/// of the even and odd parity channels.
struct ParityCheck {
  complex asymptotic;
  complex parity_form;
  complex even_channel;
  complex odd_channel;

  complex channel_sum() const { return even_channel + odd_channel; }
  double max_discrepancy() const {
    return std::max({std::abs(asymptotic - parity_form), std::abs(asymptotic - channel_sum()),
                     std::abs(parity_form - channel_sum())});
  }
};

inline ParityCheck parity_decomposition_check(const Amplitudes& amps, double x, double a) {
  detail::require_positive_k(amps.k);
  if (!std::isfinite(x) || !(std::abs(x) > a))
    throw InvalidArgument("parity check: |x| must exceed a (the asymptotic form is invalid inside the support)");
  const double k = amps.k;
  const complex i(0.0, 1.0);
  const complex R = amps.R;
  const complex T = amps.T;
  const double sgn = x > 0.0 ? 1.0 : -1.0;
  const complex incident = std::exp(i * (k * x));
  const complex outgoing = std::exp(i * (k * std::abs(x)));
  const complex s_wave = 0.5 * (R + T - 1.0);
  const complex p_wave = 0.5 * (-R + T - 1.0);

  ParityCheck out;
  out.asymptotic = x < 0.0 ? incident + R * std::exp(-i * (k * x)) : T * incident;
  out.parity_form = incident + (s_wave + sgn * p_wave) * outgoing;
  out.even_channel = std::cos(k * x) + s_wave * outgoing;
  out.odd_channel = i * std::sin(k * x) + sgn * p_wave * outgoing;
  return out;
}

/// How far a spec sits from a zero-energy threshold: propagate the k = 0
/// solution that is flat at x = -a and measure its slope at x = +a,
/// normalized to [0, 1]. Zero means a zero-energy state (R(0) != -1).
inline double zero_energy_mismatch(const PotentialSpec& spec) {
  if (spec.kind() == PotentialKind::Delta) {
    // psi'(0+) - psi'(0-) = -2 kappa psi(0); measured in units of 1/|kappa|.
    const double slope = -2.0 * std::copysign(1.0, spec.kappa());
    return std::abs(slope) / std::hypot(1.0, slope);
  }
  const auto segments = to_segments(spec);
  detail::Mat2 m;
  for (const auto& seg : segments) m = detail::segment_matrix(detail::local_z(0.0, seg), seg.width()) * m;
  const double a = spec.half_range();
  const double psi = m.m11;
  const double slope = a * m.m21;
  return std::abs(slope) / std::hypot(psi, slope);
}

}  // namespace scatter1d
