#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "scatter1d/amplitudes.hpp"

using namespace scatter1d;

namespace {

std::vector<oracle::Layer> layers_of(const PotentialSpec& spec) {
  std::vector<oracle::Layer> out;
  for (const auto& s : to_segments(spec)) out.push_back({s.left, s.right, s.depth});
  return out;
}

PotentialSpec piecewise_of(const std::vector<oracle::Layer>& layers) {
  std::vector<Segment> segs;
  for (const auto& l : layers) segs.push_back({l.left, l.right, l.depth});
  return make_piecewise(segs);
}

}  // namespace

TEST(DeltaAmplitudes, MatchLinearSolve) {
  for (double kappa : {-2.0, -0.5, 0.5, 1.0, 3.0}) {
    for (double k : {1e-3, 0.1, 0.7, 1.0, 4.0, 50.0}) {
      const auto a = delta_amplitudes(k, kappa);
      const auto ref = oracle::match_delta(k, kappa);
      EXPECT_NEAR(std::abs(a.R - ref.R), 0.0, 1e-14) << kappa << " " << k;
      EXPECT_NEAR(std::abs(a.T - ref.T), 0.0, 1e-14) << kappa << " " << k;
    }
  }
}

TEST(DeltaAmplitudes, LowEnergyInversion) {
  const auto a = delta_amplitudes(1e-8, 1.0);
  EXPECT_NEAR(a.R.real(), -1.0, 1e-7);
  EXPECT_NEAR(std::abs(a.T), 0.0, 1e-7);
}

TEST(SquareWellAmplitudes, MatchLinearSolve) {
  for (double qa : {0.5, 1.0, 3.0, 5.0, 10.0}) {
    const auto spec = make_square_well(qa, 1.3);
    for (double k : {1e-3, 0.2, 1.0, 2.5, 7.0, 40.0}) {
      const auto a = square_well_amplitudes(k, spec).amplitudes;
      const auto ref = oracle::match_layers(k, layers_of(spec));
      EXPECT_NEAR(std::abs(a.R - ref.R), 0.0, 1e-12) << qa << " " << k;
      EXPECT_NEAR(std::abs(a.T - ref.T), 0.0, 1e-12) << qa << " " << k;
    }
  }
}

TEST(SquareWellAmplitudes, InteriorWaveIsContinuousAtEdges) {
  const auto spec = make_square_well(3.0, 1.0);
  const complex i(0.0, 1.0);
  for (double k : {0.1, 1.0, 3.3}) {
    const auto [amp, wave] = square_well_amplitudes(k, spec);
    const complex left = std::exp(-i * k) + amp.R * std::exp(i * k);
    const complex right = amp.T * std::exp(i * k);
    EXPECT_NEAR(std::abs(wave(-1.0) - left), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(wave(1.0) - right), 0.0, 1e-13);
    const double h = 1e-6;
    const complex slope_in = (wave(1.0) - wave(1.0 - h)) / h;
    EXPECT_NEAR(std::abs(slope_in - i * k * right), 0.0, 1e-4 * (1 + k));
  }
}

// |T| = 1 where sin(2 l a) = 0; for qa = 3 the first one above threshold is
// 2 l a = 2 pi, i.e. ka = sqrt(pi^2 - 9).
TEST(SquareWellAmplitudes, TransmissionResonance) {
  const auto spec = make_square_well(3.0, 1.0);
  const double k = std::sqrt(std::numbers::pi * std::numbers::pi - 9.0);
  const auto a = square_well_amplitudes(k, spec).amplitudes;
  EXPECT_NEAR(std::abs(a.T), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(a.R), 0.0, 1e-14);
}

TEST(PiecewiseAmplitudes, SingleLayerEqualsSquareWell) {
  for (double qa : {0.5, 3.0, 10.0}) {
    const auto sw = make_square_well(qa, 1.0);
    const auto pw = make_piecewise(to_segments(sw));
    for (double k : {1e-3, 0.3, 2.0, 30.0}) {
      const auto a = amplitudes(k, sw);
      const auto b = amplitudes(k, pw);
      EXPECT_NEAR(std::abs(a.R - b.R), 0.0, 1e-12) << qa << " " << k;
      EXPECT_NEAR(std::abs(a.T - b.T), 0.0, 1e-12) << qa << " " << k;
    }
  }
}

TEST(PiecewiseAmplitudes, RandomWellsMatchLinearSolve) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uk(-3.0, 1.5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto layers = oracle::random_symmetric_layers(rng, 1.0, 8.0);
    const auto spec = piecewise_of(layers);
    for (int j = 0; j < 10; ++j) {
      const double k = std::pow(10.0, uk(rng));
      const auto a = amplitudes(k, spec);
      const auto ref = oracle::match_layers(k, layers);
      EXPECT_NEAR(std::abs(a.R - ref.R), 0.0, 1e-10) << trial << " " << k;
      EXPECT_NEAR(std::abs(a.T - ref.T), 0.0, 1e-10) << trial << " " << k;
    }
  }
}

TEST(PiecewiseAmplitudes, BarrierTunnelling) {
  // Repulsive layer: evanescent interior for k^2 < 2V.
  const auto spec = make_piecewise({{-1.0, 1.0, 8.0}});
  for (double k : {0.5, 2.0, 3.9, 4.1, 6.0}) {
    const auto a = amplitudes(k, spec);
    const auto ref = oracle::match_layers(k, {{-1.0, 1.0, 8.0}});
    EXPECT_NEAR(std::abs(a.T - ref.T), 0.0, 1e-12) << k;
    EXPECT_NEAR(a.unitarity(), 1.0, 1e-13) << k;
  }
}

// Properties of a unitary, parity-symmetric S-matrix at random k.
TEST(AmplitudeProperties, UnitarityAndOrthogonality) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uk(-4.0, 2.0), uq(0.1, 12.0), ukappa(-3.0, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    const double k = std::pow(10.0, uk(rng));
    PotentialSpec spec = make_delta(1.0);
    switch (trial % 3) {
      case 0: {
        double kappa = ukappa(rng);
        if (std::abs(kappa) < 1e-3) kappa = 1.0;
        spec = make_delta(kappa);
        break;
      }
      case 1: {
        double qa = uq(rng);
        if (threshold_distance(qa) < 1e-6) qa += 1e-3;
        spec = make_square_well(qa, 0.7);
        break;
      }
      default: spec = piecewise_of(oracle::random_symmetric_layers(rng, 1.0, 6.0));
    }
    const auto a = amplitudes(k, spec);
    EXPECT_NEAR(a.unitarity(), 1.0, 1e-11) << trial;
    // R T* + R* T = 0 for a symmetric potential.
    EXPECT_NEAR(std::abs(a.R * std::conj(a.T) + std::conj(a.R) * a.T), 0.0, 1e-11) << trial;
  }
}

TEST(AmplitudeDerivatives, MatchFiniteDifferences) {
  const std::vector<PotentialSpec> specs{make_delta(1.0), make_delta(-0.7), make_square_well(3.0, 1.0),
                                         make_square_well(10.0, 0.5),
                                         make_piecewise({{-1.0, -0.5, -2.0}, {-0.5, 0.5, -4.0}, {0.5, 1.0, -2.0}}),
                                         make_piecewise({{-1.0, 1.0, 3.0}})};
  for (const auto& spec : specs) {
    for (double k : {0.05, 0.6, 2.0, 9.0}) {
      const auto d = amplitude_derivatives(k, spec);
      const double h = 1e-5 * std::max(1.0, k);
      const auto p = amplitudes(k + h, spec);
      const auto m = amplitudes(k - h, spec);
      const complex dR = (p.R - m.R) / (2 * h);
      const complex dT = (p.T - m.T) / (2 * h);
      const double scale = 1.0 + std::abs(d.dR) + std::abs(d.dT);
      EXPECT_NEAR(std::abs(d.dR - dR), 0.0, 1e-7 * scale) << to_string(spec.kind()) << " k=" << k;
      EXPECT_NEAR(std::abs(d.dT - dT), 0.0, 1e-7 * scale) << to_string(spec.kind()) << " k=" << k;
    }
  }
}

TEST(Amplitudes, RejectNonPositiveK) {
  const auto w = make_square_well(3.0, 1.0);
  EXPECT_THROW(amplitudes(0.0, w), InvalidArgument);
  EXPECT_THROW(amplitudes(-1.0, w), InvalidArgument);
  EXPECT_THROW(amplitudes(std::nan(""), make_delta(1.0)), InvalidArgument);
  EXPECT_THROW(amplitude_derivatives(0.0, w), InvalidArgument);
}

TEST(Amplitudes, KindMismatchIsAnError) {
  EXPECT_THROW(square_well_amplitudes(1.0, make_delta(1.0)), InvalidArgument);
  EXPECT_THROW(piecewise_amplitudes(1.0, make_square_well(1.0, 1.0)), InvalidArgument);
}

TEST(ParityCheck, ThreeFormsAgree) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uk(0.01, 10.0), ux(0.0, 20.0);
  const std::vector<PotentialSpec> specs{make_delta(1.0), make_square_well(3.0, 1.0),
                                         make_piecewise({{-2.0, -1.0, -1.0}, {-1.0, 1.0, 2.0}, {1.0, 2.0, -1.0}})};
  for (const auto& spec : specs) {
    const double a = spec.half_range();
    for (int j = 0; j < 100; ++j) {
      const double x = (j % 2 ? 1.0 : -1.0) * (a + 1e-6 + ux(rng));
      const auto c = parity_decomposition_check(amplitudes(uk(rng), spec), x, a);
      EXPECT_LT(c.max_discrepancy(), 1e-14);
    }
  }
}

TEST(ParityCheck, RejectsInteriorPoints) {
  const auto amps = amplitudes(1.0, make_square_well(3.0, 1.0));
  EXPECT_THROW(parity_decomposition_check(amps, 0.5, 1.0), InvalidArgument);
  EXPECT_THROW(parity_decomposition_check(amps, -1.0, 1.0), InvalidArgument);
}

TEST(ZeroEnergyMismatch, VanishesAtThreshold) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  EXPECT_LT(zero_energy_mismatch(make_square_well(half_pi + 1e-7, 1.0)), 1e-6);
  EXPECT_LT(zero_energy_mismatch(make_square_well(2 * half_pi - 1e-7, 1.0)), 1e-6);
  EXPECT_GT(zero_energy_mismatch(make_square_well(3.0, 1.0)), 0.1);
  EXPECT_GT(zero_energy_mismatch(make_delta(1.0)), 0.5);
  // Free particle: flat solution stays flat, a zero-energy state.
  EXPECT_LT(zero_energy_mismatch(make_free(1.0)), 1e-15);
}
