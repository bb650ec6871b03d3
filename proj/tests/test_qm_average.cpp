#include <gtest/gtest.h>

#include <cmath>

#include "qkr/errors.hpp"
#include "qkr/fit.hpp"
#include "qkr/qm_average.hpp"

using namespace qkr;

TEST(BetaMidpoints, NodesAndValidation) {
  auto b = beta_midpoints(32);
  ASSERT_EQ(b.size(), 32u);
  EXPECT_DOUBLE_EQ(b.front(), -0.5 + 0.5 / 32);
  EXPECT_DOUBLE_EQ(b.back(), 0.5 - 0.5 / 32);
  EXPECT_THROW(beta_midpoints(31), ValidationError);
}

TEST(AverageOverBeta, MomentumConservedAtSimpleResonance) {
  const EnvelopeSpec env{kPi / 3, 0.1, 256};
  for (int ell : {1, 2}) {
    const KickedRotorParams params(1.7, kTwoPi * ell);
    auto avg = average_over_beta(env, params, 64, 25, AverageMode::ClosedForm);
    for (double p : avg.p_mean) EXPECT_NEAR(p, avg.p_mean[0], 1e-10);
  }
}

TEST(AverageOverBeta, ZeroKickConstant) {
  const EnvelopeSpec env{0.5, 0.1, 256};
  auto avg = average_over_beta(env, KickedRotorParams(0.0, 4.0 * kPi), 32, 10, AverageMode::Propagator);
  for (std::size_t t = 0; t < avg.size(); ++t) {
    EXPECT_NEAR(avg.p_mean[t], avg.p_mean[0], 1e-12);
    EXPECT_NEAR(avg.e_mean[t], avg.e_mean[0], 1e-9);
  }
}

TEST(AverageOverBeta, ClosedFormAgreesWithPropagator) {
  const EnvelopeSpec env{kPi / 2, 0.1, 512};
  const KickedRotorParams params(2.0, 4.0 * kPi);
  auto a = average_over_beta(env, params, 32, 20, AverageMode::ClosedForm);
  auto b = average_over_beta(env, params, 32, 20, AverageMode::Propagator, 3);
  for (std::size_t t = 0; t < a.size(); ++t) {
    EXPECT_NEAR(a.p_mean[t], b.p_mean[t], 1e-9);
    EXPECT_NEAR(a.e_mean[t], b.e_mean[t], 1e-8 * std::max(1.0, a.e_mean[t]));
  }
}

TEST(AverageOverBeta, DeterministicAcrossJobs) {
  const EnvelopeSpec env{1.0, 0.1, 256};
  const KickedRotorParams params(1.0, kTwoPi);
  auto a = average_over_beta(env, params, 48, 15, AverageMode::Propagator, 1);
  auto b = average_over_beta(env, params, 48, 15, AverageMode::Propagator, 5);
  EXPECT_EQ(a.p_mean, b.p_mean);
  EXPECT_EQ(a.e_mean, b.e_mean);
}

TEST(AverageOverBeta, RejectsMismatchedEnvelopes) {
  std::vector<BlochWaveState> states;
  for (double beta : beta_midpoints(32)) states.push_back(make_cell_localized_packet(0.5, 0.1, beta, 128));
  states[5] = make_cell_localized_packet(0.6, 0.1, states[5].beta(), 128);
  EXPECT_THROW(average_over_beta(states, KickedRotorParams(1.0, kTwoPi), 5, AverageMode::ClosedForm),
               ValidationError);
  std::vector<BlochWaveState> off_grid;
  for (int i = 0; i < 32; ++i) off_grid.push_back(make_cell_localized_packet(0.5, 0.1, 0.0, 128));
  EXPECT_THROW(average_over_beta(off_grid, KickedRotorParams(1.0, kTwoPi), 5, AverageMode::ClosedForm),
               ValidationError);
  EXPECT_THROW(average_over_beta(EnvelopeSpec{0.5, 0.1, 128}, KickedRotorParams(1.0, kPi), 32, 5,
                                 AverageMode::ClosedForm),
               ValidationError);
}

TEST(AveragedSlope, AnalyticAndQuadrature) {
  const EnvelopeSpec env{kPi / 4, 0.1, 512};
  auto s = averaged_energy_slope_sqr(env, 2.0, 2, 100, 256);
  EXPECT_DOUBLE_EQ(s.analytic, 1.0);
  EXPECT_NEAR(s.quadrature / s.analytic, 1.0, 0.01);
  EXPECT_EQ(averaged_energy_slope_sqr(env, 0.0, 2, 10, 64).analytic, 0.0);
  EXPECT_NEAR(averaged_energy_slope_sqr(env, 0.0, 2, 10, 64).quadrature, 0.0, 1e-12);
}

TEST(AveragedSlope, MidpointAliasingNeedsTwoLTMaxNodes) {
  // The beta integrand carries frequencies up to 2 ell t; with ell = 2 and
  // t = 100 that needs more than 400 midpoint nodes for a generic envelope.
  const EnvelopeSpec env{kPi / 2, 0.1, 512};
  auto coarse = averaged_energy_slope_sqr(env, 2.0, 2, 100, 256);
  auto fine = averaged_energy_slope_sqr(env, 2.0, 2, 100, 512);
  EXPECT_GT(std::abs(coarse.quadrature - 1.0), 0.1);
  EXPECT_NEAR(fine.quadrature, 1.0, 1e-6);
}

TEST(AveragedSlope, RichardsonAndLinearity) {
  // Below the aliasing threshold the quadrature is exact; the averaged energy
  // is linear in t (no per-beta ballistic residue survives).
  const EnvelopeSpec env{kPi / 2, 0.1, 512};
  const KickedRotorParams params(2.0, 4.0 * kPi);
  auto avg = average_over_beta(env, params, 128, 30, AverageMode::ClosedForm);
  std::vector<double> t(avg.times.begin(), avg.times.end());
  auto c = polyfit(t, avg.e_mean, 2);
  EXPECT_LT(std::abs(c[2]), 0.01 * std::abs(c[1]));
  EXPECT_NEAR(c[1], 1.0, 1e-9);
}
