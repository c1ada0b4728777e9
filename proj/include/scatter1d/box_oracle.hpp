#pragma once

// Brute-force cross-check: put the potential in a hard-wall box of length L,
// discretize H = -(1/2) d^2/dx^2 + V with second-order finite differences on
// n interior points, and count eigenvalues directly.
//
// Scattering eigenvalues are mapped back to wavevectors through the lattice
// dispersion E = (1 - cos(k dx)) / dx^2, so the free box gives k_m = m pi / L
// exactly and the counting convention cancels in interacting-minus-free
// differences.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "scatter1d/errors.hpp"
#include "scatter1d/levinson.hpp"
#include "scatter1d/parallel.hpp"
#include "scatter1d/potentials.hpp"

namespace scatter1d {

enum class Boundary { Dirichlet };

struct BoxSpectrum {
  double box_length = 0.0;
  std::size_t grid_points = 0;
  Boundary boundary = Boundary::Dirichlet;
  double k_max = 0.0;               // eigen_k is complete up to here
  std::vector<double> eigen_k;      // ascending, E >= 0 states
  std::vector<double> bound_energies;  // ascending, E < 0 states
};

/// Symmetric tridiagonal matrix: diag[i] on the diagonal, a constant
/// off-diagonal entry.
struct Tridiagonal {
  std::vector<double> diag;
  double off = 0.0;

  /// Number of eigenvalues strictly below x (Sturm sequence count).
  std::size_t count_below(double x) const {
    const double off2 = off * off;
    const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    std::size_t count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
      q = diag[i] - x - (i == 0 ? 0.0 : off2 / q);
      if (q == 0.0) q = -tiny;
      if (q < 0.0) ++count;
    }
    return count;
  }

  double gershgorin_lower() const { return *std::min_element(diag.begin(), diag.end()) - 2.0 * std::abs(off); }
  double gershgorin_upper() const { return *std::max_element(diag.begin(), diag.end()) + 2.0 * std::abs(off); }
};

namespace detail {

inline void bisect_slice(const Tridiagonal& h, double lo, double hi, std::size_t c_lo, std::size_t c_hi, double tol,
                         std::vector<double>& out) {
  if (c_hi <= c_lo) return;
  if (hi - lo <= tol) {
    out.insert(out.end(), c_hi - c_lo, 0.5 * (lo + hi));
    return;
  }
  const double mid = 0.5 * (lo + hi);
  const std::size_t c_mid = h.count_below(mid);
  bisect_slice(h, lo, mid, c_lo, c_mid, tol, out);
  bisect_slice(h, mid, hi, c_mid, c_hi, tol, out);
}

}  // namespace detail

/// All eigenvalues in [lo, hi), ascending, by Sturm-sequence bisection over
/// parallel spectral slices.
inline std::vector<double> eigenvalues_in(const Tridiagonal& h, double lo, double hi) {
  const double norm = std::max(std::abs(h.gershgorin_lower()), std::abs(h.gershgorin_upper()));
  const double tol = 8.0 * std::numeric_limits<double>::epsilon() * norm;
  const std::size_t slices = std::max<std::size_t>(1, max_threads() * 4);
  std::vector<double> edges(slices + 1);
  std::vector<std::size_t> counts(slices + 1);
  for (std::size_t s = 0; s <= slices; ++s) edges[s] = lo + (hi - lo) * static_cast<double>(s) / slices;
  parallel_for(slices + 1, [&](std::size_t s) { counts[s] = h.count_below(edges[s]); });
  std::vector<std::vector<double>> parts(slices);
  parallel_for(slices, [&](std::size_t s) {
    detail::bisect_slice(h, edges[s], edges[s + 1], counts[s], counts[s + 1], tol, parts[s]);
  });
  std::vector<double> all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

namespace detail {

// Site potentials: cell averages of the segments, or a lattice delta of
// strength kappa (depth kappa/dx on the centre site, split over the two
// central sites when n is even).
inline std::vector<double> site_potential(const PotentialSpec& spec, double box_length, std::size_t n) {
  const double dx = box_length / static_cast<double>(n + 1);
  std::vector<double> v(n, 0.0);
  if (spec.kind() == PotentialKind::Delta) {
    const double depth = -spec.kappa() / dx;
    if (n % 2 == 1) {
      v[n / 2] = depth;
    } else {
      v[n / 2 - 1] = 0.5 * depth;
      v[n / 2] = 0.5 * depth;
    }
    return v;
  }
  const auto segments = to_segments(spec);
  const double a = spec.half_range();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = -0.5 * box_length + static_cast<double>(i + 1) * dx;
    if (std::abs(x) > a + dx) continue;
    const double lo = x - 0.5 * dx;
    const double hi = x + 0.5 * dx;
    double acc = 0.0;
    for (const auto& s : segments) {
      const double overlap = std::min(hi, s.right) - std::max(lo, s.left);
      if (overlap > 0.0) acc += overlap * s.depth;
    }
    v[i] = acc / dx;
  }
  return v;
}

}  // namespace detail

/// Largest k the discretization resolves: n >= 20 k L / pi.
inline double resolved_k_max(double box_length, std::size_t n) {
  return static_cast<double>(n) * std::numbers::pi / (20.0 * box_length);
}

inline Tridiagonal box_hamiltonian(const PotentialSpec& spec, double box_length, std::size_t n) {
  const double dx = box_length / static_cast<double>(n + 1);
  Tridiagonal h;
  h.diag = detail::site_potential(spec, box_length, n);
  for (double& d : h.diag) d += 1.0 / (dx * dx);
  h.off = -0.5 / (dx * dx);
  return h;
}

inline BoxSpectrum discretize_and_solve(const PotentialSpec& spec, double box_length, std::size_t n,
                                        std::optional<double> k_max = std::nullopt) {
  const double scale = spec.length_scale();
  if (!(box_length >= 50.0 * scale))
    throw InvalidArgument("box oracle: need L >= 50 * max(a, 1/|kappa|), got L = " + std::to_string(box_length));
  if (n < 20) throw InvalidArgument("box oracle: need at least 20 grid points");
  const double resolved = resolved_k_max(box_length, n);
  const double k_top = k_max.value_or(resolved);
  if (!(k_top > 0.0) || k_top > resolved * (1.0 + 1e-12))
    throw InvalidArgument("box oracle: n too small for requested k range (need n >= 20 k_max L / pi = " +
                          std::to_string(20.0 * k_top * box_length / std::numbers::pi) + ")");

  const Tridiagonal h = box_hamiltonian(spec, box_length, n);
  const double dx = box_length / static_cast<double>(n + 1);
  const double e_max = (1.0 - std::cos(k_top * dx)) / (dx * dx);
  const auto eig = eigenvalues_in(h, h.gershgorin_lower(), e_max);

  BoxSpectrum out;
  out.box_length = box_length;
  out.grid_points = n;
  out.k_max = k_top;
  for (double e : eig) {
    if (e < 0.0) {
      out.bound_energies.push_back(e);
    } else {
      out.eigen_k.push_back(std::acos(std::clamp(1.0 - e * dx * dx, -1.0, 1.0)) / dx);
    }
  }
  return out;
}

/// Count of interacting minus free eigenstates with wavevector <= k.
inline double staircase_difference(const BoxSpectrum& interacting, const BoxSpectrum& free, double k) {
  if (interacting.box_length != free.box_length || interacting.grid_points != free.grid_points ||
      interacting.boundary != free.boundary)
    throw InvalidArgument("staircase difference: spectra come from different discretizations");
  if (!(k >= 0.0) || k > std::min(interacting.k_max, free.k_max))
    throw InvalidArgument("staircase difference: k outside the resolved range");
  auto below = [k](const std::vector<double>& v) {
    return static_cast<double>(std::upper_bound(v.begin(), v.end(), k) - v.begin());
  };
  return below(interacting.eigen_k) - below(free.eigen_k);
}

/// Checkpoints log-spaced over [k_lo, k_hi], each snapped to the midpoint
/// between consecutive free box levels m pi / L so free counts are never
/// on a step.
inline std::vector<double> oracle_checkpoints(double box_length, double k_lo, double k_hi, std::size_t count) {
  if (!(k_hi > k_lo) || !(k_lo > 0.0) || count < 2) throw InvalidArgument("checkpoints: need 0 < k_lo < k_hi, count >= 2");
  const double spacing = std::numbers::pi / box_length;
  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double k = k_lo * std::pow(k_hi / k_lo, static_cast<double>(i) / static_cast<double>(count - 1));
    double snapped = (std::floor(k / spacing) + 0.5) * spacing;
    if (snapped > k_hi) snapped -= spacing;
    if (out.empty() || snapped > out.back()) out.push_back(snapped);
  }
  return out;
}

struct OracleRow {
  double k = 0.0;
  double staircase_diff = 0.0;
  double cumulative_dos_integral = 0.0;  // 2 int_0^k delta_rho + delta weight
};

/// Staircase difference next to the cumulative loss spectrum at each checkpoint.
inline std::vector<OracleRow> oracle_comparison(const BoxSpectrum& interacting, const BoxSpectrum& free,
                                                const PotentialSpec& spec, const std::vector<double>& checkpoints) {
  std::vector<OracleRow> rows(checkpoints.size());
  parallel_for(checkpoints.size(), [&](std::size_t i) {
    const double k = checkpoints[i];
    rows[i].k = k;
    rows[i].staircase_diff = staircase_difference(interacting, free, k);
    rows[i].cumulative_dos_integral = 2.0 * cumulative_density(spec, k).value + kDeltaWeightAtZero.value();
  });
  return rows;
}

/// Bound-state energies of the square well from its transcendental
/// matching conditions, deepest first. With xi = p a and eta = kappa_b a,
/// xi^2 + eta^2 = (qa)^2 and eta = xi tan(xi) (even) or -xi cot(xi) (odd).
inline std::vector<double> square_well_bound_energies(const PotentialSpec& spec) {
  detail::require_kind(spec, PotentialKind::SquareWell, "square_well_bound_energies");
  const double qa = spec.qa();
  const double a = spec.half_range();
  constexpr double half_pi = std::numbers::pi / 2.0;
  std::vector<double> energies;
  for (int m = 0; m * half_pi < qa; ++m) {
    const bool even = m % 2 == 0;
    // Multiply by the sign of cos (even) or sin (odd) on the branch so the
    // matching function increases from negative to positive.
    const double centre = (m + 0.5) * half_pi;
    const double branch_sign = (even ? std::cos(centre) : std::sin(centre)) > 0.0 ? 1.0 : -1.0;
    auto match = [&](double xi) {
      const double eta = std::sqrt(std::max(0.0, qa * qa - xi * xi));
      return branch_sign * (even ? xi * std::sin(xi) - eta * std::cos(xi) : -xi * std::cos(xi) - eta * std::sin(xi));
    };
    double lo = m * half_pi;
    double hi = std::min(qa, (m + 1) * half_pi);
    for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (match(mid) < 0.0 ? lo : hi) = mid;
    }
    const double xi = 0.5 * (lo + hi);
    const double eta = std::sqrt(std::max(0.0, qa * qa - xi * xi));
    energies.push_back(-0.5 * (eta / a) * (eta / a));
  }
  return energies;
}

}  // namespace scatter1d
