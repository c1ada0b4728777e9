#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "scatter1d/thermo.hpp"

using namespace scatter1d;

TEST(Erf, MatchesLongDoubleSeries) {
  for (double x = -3.0; x <= 3.0; x += 0.01) {
    const double ref = static_cast<double>(oracle::erf_series(x));
    EXPECT_NEAR(special::erf(x), ref, 1e-12 * std::max(std::abs(ref), 1e-300) + 1e-300) << x;
  }
  EXPECT_NEAR(special::erf(1.0), 0.8427007929497149, 1e-12);
  EXPECT_EQ(special::erf(0.0), 0.0);
}

TEST(Erf, AgreesWithStdlibBeyondSeriesRange) {
  for (double x = 0.51; x <= 26.0; x += 0.037) {
    EXPECT_NEAR(special::erf(x), std::erf(x), 1e-15) << x;
    EXPECT_NEAR(special::erfc(x) / std::erfc(x), 1.0, 1e-12) << x;
    EXPECT_NEAR(special::erfcx(x) / (std::exp(x * x) * std::erfc(x)), 1.0, 1e-11) << x;
  }
  EXPECT_EQ(special::erf(40.0), 1.0);
  EXPECT_EQ(special::erf(-40.0), -1.0);
}

TEST(Erf, IsOdd) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 8.0);
  for (int j = 0; j < 200; ++j) {
    const double x = u(rng);
    EXPECT_EQ(special::erf(-x), -special::erf(x));
  }
}

TEST(Erfcx, LargeArgumentAsymptote) {
  // erfcx(x) ~ 1/(x sqrt(pi)) (1 - 1/(2x^2))
  const double x = 1e4;
  EXPECT_NEAR(special::erfcx(x) * x * std::sqrt(std::numbers::pi), 1.0 - 0.5 / (x * x), 1e-12);
}

// Bound term 1, erf term -1/2 and the delta(k) weight -1/2 cancel at x = 0,
// leaving sqrt(x/pi) + O(x).
TEST(DeltaQ2, SmallXLimit) {
  for (double x : {1e-12, 1e-10, 1e-8}) {
    const double v = delta_q2({x, 1.0, 1.0});
    EXPECT_NEAR(v / std::sqrt(x / std::numbers::pi), 1.0, 2.0 * std::sqrt(x)) << x;
  }
}

TEST(DeltaQ2, ValueAtOne) {
  const double erf1 = static_cast<double>(oracle::erf_series(1.0L));
  const double expect = std::exp(1.0) * (1.0 + 0.5 * (erf1 - 1.0)) - 0.5;
  EXPECT_NEAR(delta_q2({1.0, 1.0, 1.0}), expect, 1e-14);
  // same x reached through beta and kappa separately
  EXPECT_NEAR(delta_q2({0.25, 2.0, 1.0}), expect, 1e-14);
}

TEST(DeltaQ2, MatchesSpectralSum) {
  for (double x : {0.1, 1.0, 5.0}) {
    for (double kappa : {0.5, 1.0, 3.0}) {
      const ThermoParams p{x / (kappa * kappa), kappa, 1.0};
      const double closed = delta_q2(p);
      EXPECT_NEAR(delta_q2_from_density(p) / closed, 1.0, 1e-8) << x << " " << kappa;
      EXPECT_NEAR(delta_q2_from_density(p, DensityMethod::Shortcut) / closed, 1.0, 1e-8) << x << " " << kappa;
    }
  }
}

TEST(DeltaQ2, StrictlyIncreasingAndPositive) {
  double previous = 0.0;
  for (double e = -6.0; e <= 2.8; e += 0.05) {
    const double v = delta_q2({std::pow(10.0, e), 1.0, 1.0});
    EXPECT_GT(v, previous) << e;
    previous = v;
  }
}

TEST(DeltaQ2, OverflowBranchIsContinuous) {
  const double below = delta_q2({700.0, 1.0, 1.0});
  const double above = delta_q2({700.0 * (1 + 1e-12), 1.0, 1.0});
  EXPECT_NEAR(above / below, 1.0, 1e-9);
  EXPECT_THROW(delta_q2({720.0, 1.0, 1.0}), NumericalError);
}

TEST(Pressure, ClosedFormEqualsVirialChain) {
  for (double x : {1e-4, 0.1, 1.0, 5.0, 50.0, 600.0}) {
    const ThermoParams p{x / 4.0, 2.0, 0.3};
    EXPECT_NEAR(pressure_from_partition_chain(p) / pressure_correction(p), 1.0, 1e-12) << x;
  }
}

TEST(Pressure, PositiveAndQuadraticInDensity) {
  const ThermoParams p{0.7, 1.3, 0.5};
  const ThermoParams q{0.7, 1.3, 1.0};
  EXPECT_GT(pressure_correction(p), 0.0);
  EXPECT_NEAR(pressure_correction(q) / pressure_correction(p), 4.0, 1e-13);
  EXPECT_EQ(pressure_correction({0.7, 1.3, 0.0}), 0.0);
}

// As beta -> 0 the correction decays monotonically, vanishes against the
// ideal-gas pressure rho/beta, and levels off at 2 kappa rho^2.
TEST(Pressure, HighTemperatureLimit) {
  const double kappa = 1.5, rho = 0.8;
  double previous = std::numeric_limits<double>::infinity();
  for (double e = 0.0; e >= -8.0; e -= 0.25) {
    const double beta = std::pow(10.0, e);
    const double dp = pressure_correction({beta, kappa, rho});
    EXPECT_LT(dp, previous) << beta;
    previous = dp;
  }
  const double beta = 1e-10;
  const double dp = pressure_correction({beta, kappa, rho});
  EXPECT_NEAR(dp, 2.0 * kappa * rho * rho, 1e-4);
  EXPECT_LT(dp / (rho / beta), 1e-9);
}

TEST(Thermodynamics, BundlesResults) {
  const auto r = thermodynamics({1.0, 1.0, 2.0});
  EXPECT_DOUBLE_EQ(r.x_used, 1.0);
  EXPECT_NEAR(r.delta_p, 4.0 * r.delta_p_coefficient, 1e-12);
  EXPECT_NEAR(r.delta_p_coefficient, 7.1057321823506, 1e-12);
}

TEST(Thermodynamics, RejectsInvalidParameters) {
  EXPECT_THROW(delta_q2({0.0, 1.0, 1.0}), InvalidArgument);
  EXPECT_THROW(delta_q2({1.0, -1.0, 1.0}), InvalidArgument);
  EXPECT_THROW(pressure_correction({1.0, 1.0, -1.0}), InvalidArgument);
  EXPECT_THROW(delta_q2({std::nan(""), 1.0, 1.0}), InvalidArgument);
}

TEST(PartitionFunctions, PerLength) {
  EXPECT_NEAR(q1_per_length(1.0), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-16);
  EXPECT_NEAR(q2_com_per_length(2.0), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-16);
}
