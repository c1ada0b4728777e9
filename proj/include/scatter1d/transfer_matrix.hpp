#pragma once

// Propagation of (psi, psi') across constant-potential segments.
//
// Inside a segment of potential V the local squared wavevector is
// z = k^2 - 2V. Writing t for the distance from the segment's left edge,
//
//   psi(t)  = psi0 * c(t) + dpsi0 * s(t)
//   c(t) = cos(sqrt(z) t),  s(t) = sin(sqrt(z) t) / sqrt(z)
//
// which is real for either sign of z (z < 0 gives cosh/sinh: the evanescent
// branch, l = i*sqrt(2V - k^2)). Everything below is expressed through the
// entire functions of u = z t^2 so that z -> 0 needs no special casing.

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "scatter1d/errors.hpp"
#include "scatter1d/potentials.hpp"

namespace scatter1d::detail {

using complex = std::complex<double>;

// Power series sum_{n>=0} coeff(n) * u^n, evaluated until the terms vanish.
template <typename Coeff>
double entire_series(double u, Coeff coeff) {
  double sum = 0.0;
  double upow = 1.0;
  for (int n = 0; n < 40; ++n) {
    const double term = coeff(n) * upow;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    upow *= u;
  }
  return sum;
}

inline double inv_factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return 1.0 / f;
}

// cos(sqrt(u)), continued to cosh(sqrt(-u)).
inline double cos_root(double u) { return u >= 0.0 ? std::cos(std::sqrt(u)) : std::cosh(std::sqrt(-u)); }

// sin(sqrt(u))/sqrt(u), continued to sinh(sqrt(-u))/sqrt(-u).
inline double sinc_root(double u) {
  if (std::abs(u) < 1.0)
    return entire_series(u, [](int n) { return (n % 2 ? -1.0 : 1.0) * inv_factorial(2 * n + 1); });
  const double r = std::sqrt(std::abs(u));
  return u > 0.0 ? std::sin(r) / r : std::sinh(r) / r;
}

// (1 - sinc_root(u)) / u
inline double one_minus_sinc_over_u(double u) {
  if (std::abs(u) < 1.0)
    return entire_series(u, [](int n) { return (n % 2 ? -1.0 : 1.0) * inv_factorial(2 * n + 3); });
  return (1.0 - sinc_root(u)) / u;
}

// (cos_root(u) - sinc_root(u)) / (2u)
inline double cos_minus_sinc_over_2u(double u) {
  if (std::abs(u) < 1.0)
    return entire_series(u, [](int n) { return (n % 2 ? 1.0 : -1.0) * (n + 1) * inv_factorial(2 * n + 3); });
  return (cos_root(u) - sinc_root(u)) / (2.0 * u);
}

struct Mat2 {
  double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.m11 * y.m11 + x.m12 * y.m21, x.m11 * y.m12 + x.m12 * y.m22,
            x.m21 * y.m11 + x.m22 * y.m21, x.m21 * y.m12 + x.m22 * y.m22};
  }
  friend Mat2 operator+(const Mat2& x, const Mat2& y) {
    return {x.m11 + y.m11, x.m12 + y.m12, x.m21 + y.m21, x.m22 + y.m22};
  }
  std::array<complex, 2> apply(const std::array<complex, 2>& v) const {
    return {m11 * v[0] + m12 * v[1], m21 * v[0] + m22 * v[1]};
  }
  bool finite_and_bounded() const {
    for (double x : {m11, m12, m21, m22})
      if (!std::isfinite(x) || std::abs(x) > 1e250) return false;
    return true;
  }
};

// Maps (psi, psi') at the left edge of a segment to its right edge.
inline Mat2 segment_matrix(double z, double width) {
  const double u = z * width * width;
  const double c = cos_root(u);
  const double s = width * sinc_root(u);
  return {c, s, -z * s, c};
}

// d(segment_matrix)/dz
inline Mat2 segment_matrix_dz(double z, double width) {
  const double w2 = width * width;
  const double u = z * w2;
  const double s = width * sinc_root(u);
  const double dc = -0.5 * w2 * sinc_root(u);
  const double ds = w2 * width * cos_minus_sinc_over_2u(u);
  return {dc, ds, -s - z * ds, dc};
}

// Integral of |psi|^2 across one segment, given (psi, psi') at its left edge.
inline double segment_norm(double z, double width, complex psi0, complex dpsi0) {
  const double w = width;
  const double icc = 0.5 * w * (1.0 + sinc_root(4.0 * z * w * w));
  const double iss = 2.0 * w * w * w * one_minus_sinc_over_u(4.0 * z * w * w);
  const double sr = sinc_root(z * w * w);
  const double ics = 0.5 * w * w * sr * sr;
  return std::norm(psi0) * icc + std::norm(dpsi0) * iss + 2.0 * std::real(psi0 * std::conj(dpsi0)) * ics;
}

inline double local_z(double k, const Segment& s) { return k * k - 2.0 * s.depth; }

struct Transfer {
  Mat2 m;   // (psi, psi')(-a) -> (psi, psi')(a)
  Mat2 dm;  // d m / dk
};

inline Transfer compose(double k, std::span<const Segment> segments, bool with_derivative) {
  Transfer t;
  t.dm = {0.0, 0.0, 0.0, 0.0};
  for (const auto& seg : segments) {
    const double z = local_z(k, seg);
    const Mat2 p = segment_matrix(z, seg.width());
    if (with_derivative) {
      Mat2 dp = segment_matrix_dz(z, seg.width());
      dp = {2.0 * k * dp.m11, 2.0 * k * dp.m12, 2.0 * k * dp.m21, 2.0 * k * dp.m22};
      t.dm = dp * t.m + p * t.dm;
    }
    t.m = p * t.m;
  }
  if (!t.m.finite_and_bounded() || (with_derivative && !t.dm.finite_and_bounded()))
    throw NumericalError(
        "transfer matrix overflow in an evanescent segment; rescale the potential (shallower or narrower barrier)");
  return t;
}

// Reflection/transmission read off a composed transfer matrix, with the
// incident amplitude on the left fixed to exactly 1:
//   psi(-a) = e^{-ika} + R e^{ika},  psi(a) = T e^{ika}.
struct TransferAmplitudes {
  complex R, T;
  complex dR, dT;                  // valid only when derivatives were requested
  std::array<complex, 2> at_left;  // (psi, psi')(-a)
};

inline TransferAmplitudes solve_transfer(double k, double a, const Transfer& t, bool with_derivative) {
  const complex i(0.0, 1.0);
  const Mat2& m = t.m;
  // Outgoing condition psi'(a) = ik psi(a), with R~ = R e^{2ika}:
  //   alpha (1 + R~) + gamma (1 - R~) = 0
  const complex alpha = m.m21 - i * k * m.m11;
  const complex gamma = i * k * (m.m22 - i * k * m.m12);
  const complex denom = alpha - gamma;
  const complex rt = -(alpha + gamma) / denom;
  const complex tau = m.m11 * (1.0 + rt) + i * k * m.m12 * (1.0 - rt);
  const complex phase = std::exp(complex(0.0, -2.0 * k * a));

  TransferAmplitudes out;
  out.R = rt * phase;
  out.T = tau * phase;
  const complex left_phase = std::exp(complex(0.0, -k * a));
  out.at_left = {left_phase * (1.0 + rt), i * k * left_phase * (1.0 - rt)};

  if (with_derivative) {
    const Mat2& dm = t.dm;
    const complex dalpha = dm.m21 - i * m.m11 - i * k * dm.m11;
    const complex dgamma = i * m.m22 + i * k * dm.m22 + 2.0 * k * m.m12 + k * k * dm.m12;
    const complex drt = -2.0 * (alpha * dgamma - dalpha * gamma) / (denom * denom);
    const complex dtau = dm.m11 * (1.0 + rt) + m.m11 * drt + i * m.m12 * (1.0 - rt) +
                         i * k * dm.m12 * (1.0 - rt) - i * k * m.m12 * drt;
    out.dR = (drt - 2.0 * i * a * rt) * phase;
    out.dT = (dtau - 2.0 * i * a * tau) * phase;
  }
  return out;
}

}  // namespace scatter1d::detail
