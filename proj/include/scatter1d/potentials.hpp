#pragma once

// Finite-range symmetric 1D potentials.
//
// Units: hbar = 1, m = 1. A square well of depth V0 is described by the
// dimensionless strength qa = a*sqrt(2*V0); a delta potential V(x) = -g*delta(x)
// by kappa = g (positive = attractive). Piecewise-constant segments carry
// their potential energy directly, with depth < 0 meaning attraction.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "scatter1d/errors.hpp"

namespace scatter1d {

enum class PotentialKind { Delta, SquareWell, PiecewiseConstant };

inline const char* to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::Delta: return "Delta";
    case PotentialKind::SquareWell: return "SquareWell";
    case PotentialKind::PiecewiseConstant: return "PiecewiseConstant";
  }
  return "?";
}

struct Segment {
  double left = 0.0;
  double right = 0.0;
  double depth = 0.0;  // potential energy inside [left, right]

  double width() const { return right - left; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Tolerance on qa mod pi/2 inside which a square well is rejected as a
/// zero-energy threshold case.
inline constexpr double kThresholdTolerance = 1e-9;

class PotentialSpec;
PotentialSpec make_delta(double kappa);
PotentialSpec make_square_well(double qa, double a);
PotentialSpec make_piecewise(std::vector<Segment> segments);

/// Immutable description of a symmetric potential supported on |x| <= a.
/// Construct through make_delta / make_square_well / make_piecewise.
class PotentialSpec {
 public:
  PotentialKind kind() const { return kind_; }

  double kappa() const {
    require(PotentialKind::Delta, "kappa");
    return kappa_;
  }
  double qa() const {
    require(PotentialKind::SquareWell, "qa");
    return qa_;
  }
  /// Well wavevector q = qa / a.
  double q() const {
    require(PotentialKind::SquareWell, "q");
    return qa_ / a_;
  }
  /// Half-width a of the support (0 for Delta).
  double half_range() const { return a_; }

  std::span<const Segment> segments() const {
    require(PotentialKind::PiecewiseConstant, "segments");
    return segments_;
  }

  bool is_attractive() const {
    switch (kind_) {
      case PotentialKind::Delta: return kappa_ > 0.0;
      case PotentialKind::SquareWell: return true;
      case PotentialKind::PiecewiseConstant:
        for (const auto& s : segments_)
          if (s.depth < 0.0) return true;
        return false;
    }
    return false;
  }

  /// Natural length used to scale wavevector ranges: a, or 1/|kappa| for Delta.
  double length_scale() const { return kind_ == PotentialKind::Delta ? 1.0 / std::abs(kappa_) : a_; }

  /// V(x). For Delta the value is 0 away from the origin and -sign(kappa)*inf at it.
  double operator()(double x) const {
    const double ax = std::abs(x);
    switch (kind_) {
      case PotentialKind::Delta:
        if (ax > 0.0) return 0.0;
        return -std::copysign(std::numeric_limits<double>::infinity(), kappa_);
      case PotentialKind::SquareWell:
        return ax <= a_ ? -0.5 * q() * q() : 0.0;
      case PotentialKind::PiecewiseConstant:
        if (ax > a_) return 0.0;
        // Look up |x| on the right half, intervals closed on the right, so
        // V(x) == V(-x) holds bit for bit.
        for (const auto& s : segments_)
          if (s.right >= ax && s.left < ax) return s.depth;
        for (const auto& s : segments_)
          if (s.left <= 0.0 && s.right >= 0.0) return s.depth;
        return 0.0;
    }
    return 0.0;
  }

  friend bool operator==(const PotentialSpec&, const PotentialSpec&) = default;

 private:
  PotentialSpec() = default;

  void require(PotentialKind k, const char* field) const {
    if (kind_ != k)
      throw InvalidArgument(std::string(field) + " is not defined for a " + to_string(kind_) + " potential");
  }

  PotentialKind kind_ = PotentialKind::Delta;
  double kappa_ = 0.0;
  double qa_ = 0.0;
  double a_ = 0.0;
  std::vector<Segment> segments_;

  friend PotentialSpec make_delta(double);
  friend PotentialSpec make_square_well(double, double);
  friend PotentialSpec make_piecewise(std::vector<Segment>);
};

inline PotentialSpec make_delta(double kappa) {
  if (!std::isfinite(kappa)) throw InvalidArgument("delta potential: kappa must be finite");
  if (kappa == 0.0)
    throw InvalidArgument("delta potential: kappa = 0 is the free case; use make_free() for it");
  PotentialSpec spec;
  spec.kind_ = PotentialKind::Delta;
  spec.kappa_ = kappa;
  return spec;
}

/// Distance of qa from the nearest threshold n*pi/2, n >= 1.
inline double threshold_distance(double qa) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  const double n = std::max(1.0, std::round(qa / half_pi));
  return std::abs(qa - n * half_pi);
}

inline PotentialSpec make_square_well(double qa, double a) {
  if (!std::isfinite(qa) || !(qa > 0.0)) throw InvalidArgument("square well: qa must be finite and > 0");
  if (!std::isfinite(a) || !(a > 0.0)) throw InvalidArgument("square well: a must be finite and > 0");
  if (threshold_distance(qa) < kThresholdTolerance)
    throw InvalidArgument("square well: threshold anomaly excluded (qa is within 1e-9 of n*pi/2)");
  PotentialSpec spec;
  spec.kind_ = PotentialKind::SquareWell;
  spec.qa_ = qa;
  spec.a_ = a;
  return spec;
}

/// Segments must tile [-a, a] in order and mirror about the origin. Edges
/// and depths are compared with a relative tolerance of 1e-12, then the
/// right half is rewritten as the exact mirror of the left half.
inline PotentialSpec make_piecewise(std::vector<Segment> segments) {
  if (segments.empty()) throw InvalidArgument("piecewise potential: no segments");
  for (const auto& s : segments) {
    if (!std::isfinite(s.left) || !std::isfinite(s.right) || !std::isfinite(s.depth))
      throw InvalidArgument("piecewise potential: non-finite segment value");
    if (!(s.right > s.left)) throw InvalidArgument("piecewise potential: segment with non-positive width");
  }
  const double a = segments.back().right;
  if (!(a > 0.0)) throw InvalidArgument("piecewise potential: support must extend to x > 0");
  const double edge_tol = 1e-12 * a;

  if (std::abs(segments.front().left + a) > edge_tol)
    throw InvalidArgument("piecewise potential: segments do not tile [-a, a] (outer edges are not mirror images)");
  for (std::size_t i = 1; i < segments.size(); ++i) {
    if (std::abs(segments[i].left - segments[i - 1].right) > edge_tol)
      throw InvalidArgument("piecewise potential: gap or overlap between segments " + std::to_string(i - 1) +
                            " and " + std::to_string(i));
  }

  const std::size_t n = segments.size();
  double depth_scale = 0.0;
  for (const auto& s : segments) depth_scale = std::max(depth_scale, std::abs(s.depth));
  for (std::size_t i = 0; i < n / 2 + 1 && i < n; ++i) {
    const Segment& lhs = segments[i];
    const Segment& rhs = segments[n - 1 - i];
    if (std::abs(lhs.left + rhs.right) > edge_tol || std::abs(lhs.right + rhs.left) > edge_tol)
      throw InvalidArgument("piecewise potential: segment edges are not mirror symmetric");
    if (std::abs(lhs.depth - rhs.depth) > 1e-12 * depth_scale)
      throw InvalidArgument("piecewise potential: asymmetric depths");
  }

  // Rebuild from a symmetrized edge list: contiguous and mirrored exactly.
  std::vector<double> edges(n + 1);
  for (std::size_t i = 0; i < n; ++i) edges[i] = segments[i].left;
  edges[n] = segments[n - 1].right;
  for (std::size_t j = 0; j <= n / 2; ++j) {
    const double e = 0.5 * (edges[j] - edges[n - j]);
    edges[j] = e;
    edges[n - j] = -e;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double depth = 0.5 * (segments[i].depth + segments[n - 1 - i].depth);
    segments[i] = {edges[i], edges[i + 1], depth};
  }
  for (std::size_t i = 0; i < n / 2; ++i) segments[n - 1 - i].depth = segments[i].depth;

  PotentialSpec spec;
  spec.kind_ = PotentialKind::PiecewiseConstant;
  spec.a_ = segments.back().right;
  spec.segments_ = std::move(segments);
  return spec;
}

/// The free particle, represented as a zero-depth piecewise potential on [-a, a].
inline PotentialSpec make_free(double a = 1.0) { return make_piecewise({{-a, a, 0.0}}); }

/// Constant-potential segments equivalent to a spec (Delta has none).
inline std::vector<Segment> to_segments(const PotentialSpec& spec) {
  switch (spec.kind()) {
    case PotentialKind::Delta: return {};
    case PotentialKind::SquareWell: {
      const double a = spec.half_range();
      return {{-a, a, -0.5 * spec.q() * spec.q()}};
    }
    case PotentialKind::PiecewiseConstant: {
      auto s = spec.segments();
      return {s.begin(), s.end()};
    }
  }
  return {};
}

}  // namespace scatter1d
