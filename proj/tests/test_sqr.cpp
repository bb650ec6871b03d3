#include <gtest/gtest.h>

#include <cmath>

#include "qkr/bloch_state.hpp"
#include "qkr/errors.hpp"
#include "qkr/fit.hpp"
#include "qkr/floquet.hpp"
#include "qkr/sqr.hpp"

using namespace qkr;

namespace {

constexpr double kSinMoment_pi2_s010 = 0.99501247919268231335;
constexpr double kSin2Moment_pi2_s010 = 0.99009933665337765111;

double max_density_diff(const BlochWaveState& a, const BlochWaveState& b) {
  double err = 0.0;
  for (std::size_t j = 0; j < a.n_grid(); ++j) {
    err = std::max(err, std::abs(std::norm(a.samples()[j]) - std::norm(b.samples()[j])));
  }
  return err;
}

double sin_moment(const BlochWaveState& s) {
  auto x = grid_points(s.n_grid());
  auto rho = density(s);
  double acc = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) acc += std::sin(x[j]) * rho[j];
  return acc * s.dx();
}

}  // namespace

TEST(SqrRegime, DriftAndClassification) {
  EXPECT_DOUBLE_EQ(drift_velocity(1, 0.0), kPi);
  EXPECT_DOUBLE_EQ(drift_velocity(2, 0.0), kTwoPi);
  EXPECT_DOUBLE_EQ(drift_velocity(1, -0.5), 0.0);
  EXPECT_THROW(drift_velocity(0, 0.0), ValidationError);

  auto r = classify_sqr(1, 0.0);
  EXPECT_EQ(r.classification, SqrClass::AntiResonant);
  EXPECT_EQ(r.q, 2);
  EXPECT_EQ(classify_sqr(2, 0.0).classification, SqrClass::Resonant);
  EXPECT_EQ(classify_sqr(1, -0.5).classification, SqrClass::Resonant);
  auto third = classify_sqr(1, 1.0 / 3.0);
  EXPECT_EQ(third.classification, SqrClass::AntiResonant);
  EXPECT_EQ(third.q, 6);
  EXPECT_EQ(classify_sqr(2, 0.25).q, 2);
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  EXPECT_EQ(classify_sqr(1, golden - 0.5).classification, SqrClass::Drifting);
}

TEST(SqrRegime, OrderDetection) {
  EXPECT_EQ(sqr_order(kTwoPi), 1);
  EXPECT_EQ(sqr_order(4.0 * kPi), 2);
  EXPECT_THROW(sqr_order(kPi), ValidationError);
  EXPECT_THROW(sqr_order(5.0), ValidationError);
}

TEST(AccumulatedPhase, SpecialCases) {
  for (double x : {-2.0, 0.0, 0.7, 3.0}) {
    EXPECT_NEAR(accumulated_phase(x, kPi, 2), 0.0, 1e-15);
    EXPECT_NEAR(accumulated_phase(x, kTwoPi, 9), 9.0 * std::cos(x), 1e-13);
    EXPECT_EQ(accumulated_phase(x, 1.3, 0), 0.0);
    const double v = kTwoPi / 3.0;
    EXPECT_NEAR(accumulated_phase(x, v, 3), 0.0, 1e-14);
  }
}

TEST(AccumulatedPhase, ClosedFormMatchesTermSum) {
  for (double v : {0.3, 1.7, kPi, 5.9, 2.0 * kTwoPi + 0.01}) {
    for (int t : {1, 2, 5, 37, 200}) {
      double direct = 0.0;
      for (int s = 0; s < t; ++s) direct += std::cos(0.4 - v * s);
      EXPECT_NEAR(accumulated_phase(0.4, v, t), direct, 1e-11 * t);
    }
  }
}

TEST(ClosedFormState, MatchesPropagatorWithPhase) {
  const KickedRotorParams params(0.5 * 4.0 * kPi, 4.0 * kPi);
  auto psi0 = make_gaussian_packet(kPi / 2, 0.1, 0.0, 1024);
  auto numeric = psi0;
  evolve(numeric, params, 7, false);
  auto closed = closed_form_state(psi0, params, 7);
  double err = 0.0;
  for (std::size_t j = 0; j < psi0.n_grid(); ++j) {
    err = std::max(err, std::abs(closed.global_phase * closed.state.samples()[j] - numeric.samples()[j]));
  }
  EXPECT_LT(err, 1e-9);
}

TEST(ClosedFormState, EquivalenceSweep) {
  for (int ell : {1, 2}) {
    for (double beta : {0.0, 0.25, -0.25, 1.0 / 3.0}) {
      for (double kappa : {0.5, 2.0}) {
        const double hbar = kTwoPi * ell;
        const KickedRotorParams params(kappa * hbar, hbar);
        auto psi0 = make_gaussian_packet(0.9, 0.12, beta, 1024);
        auto numeric = psi0;
        FloquetPropagator prop(params, beta, 1024);
        for (int t = 1; t <= 50; ++t) {
          prop.evolve(numeric, 1, false);
          if (t % 7 != 0 && t != 50) continue;
          EXPECT_LT(max_density_diff(closed_form_state(psi0, params, t).state, numeric), 1e-9)
              << "ell=" << ell << " beta=" << beta << " kappa=" << kappa << " t=" << t;
        }
      }
    }
  }
}

TEST(ClosedFormState, TwoKickCompensation) {
  const KickedRotorParams params(3.0, kTwoPi);
  auto psi0 = make_gaussian_packet(0.6, 0.1, 0.0, 512);
  EXPECT_LT(max_density_diff(closed_form_state(psi0, params, 2).state, psi0), 1e-10);
  EXPECT_LT(max_density_diff(closed_form_state(psi0, params, 0).state, psi0), 1e-13);
  EXPECT_THROW(closed_form_state(psi0, KickedRotorParams(1.0, kPi), 2), ValidationError);
}

TEST(ClosedFormState, DriftBookkeeping) {
  const KickedRotorParams params(1.0, kTwoPi);
  const double beta = 0.1;
  const double v = drift_velocity(1, beta);
  auto psi0 = make_gaussian_packet(0.3, 0.1, beta, 1024);
  for (int t : {1, 5, 13}) {
    auto s = closed_form_state(psi0, params, t).state;
    EXPECT_NEAR(std::remainder(circular_mean_position(s) - (0.3 + v * t), kTwoPi), 0.0, 1e-3);
    EXPECT_NEAR(unfolded_mean_position(s), 0.3 + v * t, 1e-3);
  }
}

TEST(SqrSeries, ResonantMomentumAndEnergy) {
  const double K = 2.0;
  const KickedRotorParams params(K, 4.0 * kPi);
  auto psi0 = make_gaussian_packet(kPi / 2, 0.1, 0.0, 1024);
  auto p = momentum_series_sqr(psi0, params, 40);
  auto e = energy_series_sqr(psi0, params, 40);
  for (int t = 0; t <= 40; ++t) {
    EXPECT_NEAR(p.p_mean[static_cast<std::size_t>(t)] - p.p_mean[0], t * K * kSinMoment_pi2_s010, 1e-12 * (1 + t));
    // J = 0 for a real packet: pure quadratic law.
    EXPECT_NEAR(e.e_mean[static_cast<std::size_t>(t)] - e.e_mean[0], 0.5 * K * K * t * t * kSin2Moment_pi2_s010,
                1e-11 * (1 + t * t));
  }
}

TEST(SqrSeries, AntiresonantPeriodTwo) {
  const double K = 1.2;
  const KickedRotorParams params(K, kTwoPi);
  auto psi0 = make_gaussian_packet(kPi / 2, 0.1, 0.0, 512);
  auto s = sqr_series(sqr_moments(psi0, params.hbar()), K, kPi, 20);
  const double D = K * sin_moment(psi0);
  for (std::size_t t = 0; t <= 20; ++t) {
    const double expected = (t % 2 == 0) ? s.p_mean[0] : s.p_mean[0] - D;
    EXPECT_NEAR(s.p_mean[t], expected, 1e-12);
    EXPECT_NEAR(s.e_mean[t], s.e_mean[t % 2], 1e-12);
  }
}

TEST(SqrSeries, MatchesSummedRecurrence) {
  const double K = 0.8;
  const int ell = 1;
  const double beta = 0.137;
  const double v = drift_velocity(ell, beta);
  auto psi0 = make_gaussian_packet(0.2, 0.15, beta, 1024);
  auto s = sqr_series(sqr_moments(psi0, kTwoPi * ell), K, v, 30);
  double p = s.p_mean[0];
  for (int t = 1; t <= 30; ++t) {
    p += K * sin_moment(translate(psi0, v * t));
    EXPECT_NEAR(s.p_mean[static_cast<std::size_t>(t)], p, 1e-12);
  }
}

TEST(SqrSeries, MatchesPropagatorWithCurrent) {
  // A moving packet (J != 0) at a drifting quasimomentum exercises every term.
  const int ell = 1;
  const double beta = 0.2113;
  const double hbar = kTwoPi * ell;
  const KickedRotorParams params(1.1, hbar);
  auto base = make_gaussian_packet(-0.4, 0.12, beta, 1024);
  auto psi0 = kick(base, KickedRotorParams(0.9, 1.0));
  auto analytic = sqr_series(sqr_moments(psi0, hbar), params.K(), drift_velocity(ell, beta), 40);
  auto numeric_state = psi0;
  auto numeric = evolve(numeric_state, params, 40);
  for (std::size_t t = 0; t <= 40; ++t) {
    EXPECT_NEAR(analytic.p_mean[t], numeric.p_mean[t], 1e-9);
    EXPECT_NEAR(analytic.e_mean[t], numeric.e_mean[t], 1e-8);
  }
}

TEST(SqrSeries, ZeroKickConstant) {
  auto psi0 = make_gaussian_packet(0.2, 0.15, 0.1, 256);
  auto s = sqr_series(sqr_moments(psi0, kTwoPi), 0.0, drift_velocity(1, 0.1), 10);
  for (std::size_t t = 0; t <= 10; ++t) {
    EXPECT_EQ(s.p_mean[t], s.p_mean[0]);
    EXPECT_EQ(s.e_mean[t], s.e_mean[0]);
  }
}

TEST(MeanValueMap, Cases) {
  auto r = mean_value_map(kPi / 2, 0.3, 1.5, kTwoPi, 10);
  EXPECT_NEAR(r.P, 0.3 + 15.0, 1e-12);
  EXPECT_NEAR(r.X, kPi / 2 + 10 * kTwoPi, 1e-12);
  for (int t = 0; t < 10; ++t) {
    const double expected = (t % 2 == 0) ? 0.0 : 1.5 * std::sin(0.7 + kPi);
    EXPECT_NEAR(mean_value_map(0.7, 0.0, 1.5, kPi, t).P, expected, 1e-12);
  }
  const double golden = kTwoPi * 0.5 * (std::sqrt(5.0) - 1.0);
  const double bound = 1.0 / std::abs(std::sin(golden / 2));
  for (int t : {10, 1000, 100000}) {
    EXPECT_LE(std::abs(mean_value_map(0.4, 0.0, 1.0, golden, t).P), bound + 1e-9);
  }
}
