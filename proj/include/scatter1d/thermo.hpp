#pragma once

// Dilute-gas thermodynamics of particles with a pairwise attractive delta
// interaction, to second order in the gas density.
//
// Units hbar = m = 1. The relative motion carries the reduced mass 1/2, so
// a relative wavevector k has energy k^2 and the bound pair sits at
// -kappa^2; only the combination x = beta * kappa^2 enters. The centre of
// mass and single-particle partition functions per unit length are
//   Q2_com / L = sqrt(1 / (pi beta)),   Q1 / L = sqrt(1 / (2 pi beta)).

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "scatter1d/dos.hpp"
#include "scatter1d/errors.hpp"
#include "scatter1d/levinson.hpp"
#include "scatter1d/potentials.hpp"
#include "scatter1d/quadrature.hpp"
#include "scatter1d/special.hpp"

namespace scatter1d {

struct ThermoParams {
  double beta = 1.0;     // 1 / kT
  double kappa = 1.0;    // > 0, attractive
  double rho_gas = 0.0;  // particles per length

  double x() const { return beta * kappa * kappa; }
};

struct ThermoResult {
  double delta_q2_per_com = 0.0;     // Delta Q2 / Q2_com
  double delta_p_coefficient = 0.0;  // Delta P / rho_gas^2
  double delta_p = 0.0;
  double x_used = 0.0;
};

namespace detail {

inline void validate(const ThermoParams& p) {
  if (!std::isfinite(p.beta) || !(p.beta > 0.0)) throw InvalidArgument("thermo: beta must be finite and > 0");
  if (!std::isfinite(p.kappa) || !(p.kappa > 0.0))
    throw InvalidArgument("thermo: kappa must be finite and > 0 (attractive delta only)");
  if (!std::isfinite(p.rho_gas) || p.rho_gas < 0.0) throw InvalidArgument("thermo: rho_gas must be finite and >= 0");
  if (!std::isfinite(p.x()) || !(p.x() > 0.0)) throw InvalidArgument("thermo: beta*kappa^2 must be finite and > 0");
}

inline constexpr double kOverflowX = 700.0;

}  // namespace detail

inline double q1_per_length(double beta) { return std::sqrt(1.0 / (2.0 * std::numbers::pi * beta)); }
inline double q2_com_per_length(double beta) { return std::sqrt(1.0 / (std::numbers::pi * beta)); }

/// Delta Q2 / Q2_com = e^x (1 + (erf(sqrt x) - 1)/2) - 1/2.
inline double delta_q2(const ThermoParams& p) {
  detail::validate(p);
  const double x = p.x();
  const double rx = std::sqrt(x);
  double r;
  if (x <= detail::kOverflowX) {
    r = std::exp(x) * (1.0 + 0.5 * (special::erf(rx) - 1.0)) - 0.5;
  } else {
    r = std::exp(x) - 0.5 * special::erfcx(rx) - 0.5;
  }
  if (!std::isfinite(r)) throw NumericalError("thermo: e^(beta kappa^2) overflows for x = " + std::to_string(x));
  return r;
}

/// The same ratio assembled from the spectrum: the bound pair's Boltzmann
/// weight e^x, the scattering continuum weighted by the density of states,
/// and the delta(k) weight at k = 0.
inline double delta_q2_from_density(const ThermoParams& p, DensityMethod method = DensityMethod::Closed) {
  detail::validate(p);
  const auto spec = make_delta(p.kappa);
  const double cutoff = std::sqrt(60.0 / p.beta);
  auto f = [&](double k) { return density_at(k, spec, method) * std::exp(-p.beta * k * k); };
  std::vector<double> pts{0.0};
  for (double s : {0.01, 0.1, 1.0, 10.0, 100.0})
    if (s * p.kappa < cutoff) pts.push_back(s * p.kappa);
  pts.push_back(cutoff);
  const double continuum = 2.0 * integrate(f, pts, 1e-13).value;
  const double bound = std::exp(p.x());
  if (!std::isfinite(bound)) throw NumericalError("thermo: bound-state weight overflows");
  return bound + continuum + kDeltaWeightAtZero.value();
}

/// Delta P = sqrt(pi/beta) (e^x [erf(sqrt x) + 1] - 1) rho^2.
inline double pressure_correction(const ThermoParams& p) {
  detail::validate(p);
  const double x = p.x();
  double bracket;
  if (x <= detail::kOverflowX) {
    bracket = std::exp(x) * (special::erf(std::sqrt(x)) + 1.0) - 1.0;
  } else {
    bracket = 2.0 * delta_q2(p);
  }
  const double dp = std::sqrt(std::numbers::pi / p.beta) * bracket * p.rho_gas * p.rho_gas;
  if (!std::isfinite(dp)) throw NumericalError("thermo: pressure correction overflows");
  return dp;
}

/// Delta P from the virial chain (Delta P) L = kT Delta Q2 (L/Q1)^2 rho^2.
inline double pressure_from_partition_chain(const ThermoParams& p) {
  const double dq2_per_length = delta_q2(p) * q2_com_per_length(p.beta);
  const double l_over_q1 = 1.0 / q1_per_length(p.beta);
  return dq2_per_length * l_over_q1 * l_over_q1 * p.rho_gas * p.rho_gas / p.beta;
}

inline ThermoResult thermodynamics(const ThermoParams& p) {
  ThermoResult r;
  r.x_used = p.x();
  r.delta_q2_per_com = delta_q2(p);
  ThermoParams unit = p;
  unit.rho_gas = 1.0;
  r.delta_p_coefficient = pressure_correction(unit);
  r.delta_p = pressure_correction(p);
  return r;
}

}  // namespace scatter1d
