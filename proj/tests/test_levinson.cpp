#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "scatter1d/box_oracle.hpp"
#include "scatter1d/levinson.hpp"

using namespace scatter1d;

// int_0^k -(1/2pi) kappa/(kappa^2 + k'^2) dk' = -atan(k/kappa) / (2pi)
TEST(CumulativeDensity, DeltaMatchesArctangent) {
  for (double kappa : {0.5, 1.0, -1.0, 3.0}) {
    const auto spec = make_delta(kappa);
    for (double k : {0.1, 1.0, 7.0, 200.0}) {
      const double expect = -std::atan(k / kappa) / (2.0 * std::numbers::pi);
      EXPECT_NEAR(cumulative_density(spec, k).value, expect, 1e-9) << kappa << " " << k;
    }
  }
  EXPECT_EQ(cumulative_density(make_delta(1.0), 0.0).value, 0.0);
}

TEST(AnalyticCount, FloorFormula) {
  EXPECT_EQ(analytic_bound_count(make_delta(1.0)), 1);
  EXPECT_EQ(analytic_bound_count(make_delta(-1.0)), 0);
  EXPECT_EQ(analytic_bound_count(make_square_well(0.5, 1.0)), 1);
  EXPECT_EQ(analytic_bound_count(make_square_well(1.6, 1.0)), 2);
  EXPECT_EQ(analytic_bound_count(make_square_well(3.0, 1.0)), 2);
  EXPECT_EQ(analytic_bound_count(make_square_well(3.2, 1.0)), 3);
  EXPECT_EQ(analytic_bound_count(make_square_well(8.0, 1.0)), 6);
  EXPECT_THROW(analytic_bound_count(make_piecewise({{-1.0, 1.0, -1.0}})), InvalidArgument);
}

TEST(CountBoundStates, Delta) {
  const auto attractive = count_bound_states(make_delta(1.0));
  EXPECT_NEAR(attractive.n_b_integrated, 1.0, 1e-6);
  ASSERT_TRUE(attractive.n_b_analytic);
  EXPECT_EQ(*attractive.n_b_analytic, 1);
  EXPECT_NEAR(count_bound_states(make_delta(-1.0)).n_b_integrated, 0.0, 1e-6);
  EXPECT_NEAR(count_bound_states(make_delta(4.0)).n_b_integrated, 1.0, 1e-6);
}

TEST(CountBoundStates, SquareWellAllMethods) {
  for (double qa : {0.5, 1.0, 2.0, 3.0, 5.0, 8.0}) {
    const auto spec = make_square_well(qa, 1.0);
    for (auto m : {DensityMethod::Closed, DensityMethod::Direct, DensityMethod::Shortcut}) {
      LevinsonOptions opt;
      opt.method = m;
      const auto r = count_bound_states(spec, opt);
      EXPECT_LT(*r.residual, 0.02) << qa << " " << to_string(m);
      EXPECT_EQ(*r.n_b_analytic, 1 + static_cast<int>(std::floor(2 * qa / std::numbers::pi)));
    }
  }
}

TEST(CountBoundStates, TailCorrectionMatchesAsymptote) {
  const auto r = count_bound_states(make_square_well(3.0, 1.0));
  // -2 * int_K^inf (-a q^2 / 2pi) / k^2 dk = a q^2 / (pi K)
  EXPECT_NEAR(r.diagnostics.tail_correction, 9.0 / (std::numbers::pi * 200.0), 1e-4);
  EXPECT_DOUBLE_EQ(r.diagnostics.cutoff, 200.0);
}

TEST(CountBoundStates, ScalesWithWidth) {
  const auto narrow = count_bound_states(make_square_well(5.0, 0.1));
  const auto wide = count_bound_states(make_square_well(5.0, 10.0));
  EXPECT_NEAR(narrow.n_b_integrated, wide.n_b_integrated, 1e-6);
  EXPECT_NEAR(narrow.diagnostics.cutoff, 2000.0, 1e-9);
}

TEST(CountBoundStates, PiecewiseAgreesWithBoxOracle) {
  const auto spec = make_piecewise({{-1.0, -0.4, -3.0}, {-0.4, 0.4, -9.0}, {0.4, 1.0, -3.0}});
  const auto r = count_bound_states(spec);
  EXPECT_FALSE(r.n_b_analytic);
  EXPECT_FALSE(r.residual);
  const auto box = discretize_and_solve(spec, 60.0, 4000, 1.0);
  EXPECT_NEAR(r.n_b_integrated, static_cast<double>(box.bound_energies.size()), 0.02);
}

TEST(CountBoundStates, FromSampledDensity) {
  const auto density = sample_density(make_square_well(3.0, 1.0), {1e-4, 250.0, 60000, GridSpacing::Mixed});
  const auto r = count_bound_states(density);
  EXPECT_NEAR(r.n_b_integrated, 2.0, 0.02);
  const auto short_grid = sample_density(make_square_well(3.0, 1.0), {1e-3, 20.0, 100});
  EXPECT_THROW(count_bound_states(short_grid), InvalidArgument);
}

TEST(CountBoundStates, RejectsSmallCutoff) {
  LevinsonOptions opt;
  opt.cutoff_scale = 100.0;
  EXPECT_THROW(count_bound_states(make_delta(1.0), opt), InvalidArgument);
}

TEST(Staircase, StepsAtHalfPiMultiples) {
  const auto pts = staircase_sweep(sweep_values(0.1, 10.0, 0.05));
  int previous = 1;
  for (const auto& p : pts) {
    const double n = p.report.n_b_integrated;
    EXPECT_NEAR(n, std::round(n), 0.02) << p.qa;
    const int count = static_cast<int>(std::round(n));
    EXPECT_GE(count, previous) << p.qa;
    previous = count;
    EXPECT_EQ(count, 1 + static_cast<int>(std::floor(2.0 * p.qa / std::numbers::pi))) << p.qa;
  }
  EXPECT_EQ(previous, 7);
}

TEST(Staircase, NudgesOffThresholds) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  EXPECT_DOUBLE_EQ(nudge_from_threshold(half_pi), half_pi + 1e-3);
  EXPECT_DOUBLE_EQ(nudge_from_threshold(half_pi - 1e-4), half_pi - 1e-3);
  EXPECT_DOUBLE_EQ(nudge_from_threshold(3.0), 3.0);
  EXPECT_DOUBLE_EQ(nudge_from_threshold(0.1), 0.1);
  const auto pts = staircase_sweep({std::numbers::pi});
  EXPECT_EQ(pts[0].qa_requested, std::numbers::pi);
  EXPECT_DOUBLE_EQ(pts[0].qa, std::numbers::pi + 1e-3);
  EXPECT_NEAR(pts[0].report.n_b_integrated, 3.0, 0.02);
}

TEST(SweepValues, InclusiveEnd) {
  const auto v = sweep_values(0.1, 10.0, 0.05);
  EXPECT_EQ(v.size(), 199u);
  EXPECT_DOUBLE_EQ(v.front(), 0.1);
  EXPECT_NEAR(v.back(), 10.0, 1e-12);
  EXPECT_THROW(sweep_values(1.0, 0.0, 0.1), InvalidArgument);
  EXPECT_THROW(sweep_values(0.0, 1.0, 0.0), InvalidArgument);
}
