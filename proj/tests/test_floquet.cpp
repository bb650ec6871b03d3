#include <gtest/gtest.h>

#include <cmath>

#include "qkr/bloch_state.hpp"
#include "qkr/errors.hpp"
#include "qkr/fit.hpp"
#include "qkr/floquet.hpp"

using namespace qkr;

namespace {

constexpr double kSinMoment_pi2_s010 = 0.99501247919268231335;

double max_abs_diff(const BlochWaveState& a, const BlochWaveState& b) {
  double err = 0.0;
  for (std::size_t j = 0; j < a.n_grid(); ++j) err = std::max(err, std::abs(a.samples()[j] - b.samples()[j]));
  return err;
}

double bessel_j(int m, double x) {
  const double v = std::cyl_bessel_j(static_cast<double>(std::abs(m)), x);
  return (m < 0 && (m % 2 != 0)) ? -v : v;
}

std::vector<std::size_t> local_maxima(const std::vector<double>& rho, double floor) {
  std::vector<std::size_t> peaks;
  const std::size_t n = rho.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double l = rho[(j + n - 1) % n], r = rho[(j + 1) % n];
    if (rho[j] > l && rho[j] >= r && rho[j] > floor) peaks.push_back(j);
  }
  return peaks;
}

}  // namespace

TEST(FreeEvolve, TalbotIdentityAtFourPi) {
  const KickedRotorParams params(1.0, 4.0 * kPi);
  auto s = make_gaussian_packet(kPi / 2, 0.1, 0.0, 1024);
  EXPECT_LT(max_abs_diff(free_evolve(s, params, 1.0), s), 1e-12);
  auto wide = make_gaussian_packet(-1.0, 0.02, 0.0, 2048);
  EXPECT_LT(max_abs_diff(free_evolve(wide, params, 1.0), wide), 1e-12);
}

TEST(FreeEvolve, PhaseAdditivity) {
  const KickedRotorParams params(1.0, 1.7);
  auto s = make_gaussian_packet(0.3, 0.15, 0.1, 512);
  auto split = free_evolve(free_evolve(s, params, 0.3), params, 0.2);
  EXPECT_LT(max_abs_diff(split, free_evolve(s, params, 0.5)), 1e-12);
  EXPECT_THROW(free_evolve(s, params, 0.0), ValidationError);
  EXPECT_THROW(free_evolve(s, params, 1.5), ValidationError);
}

TEST(FreeEvolve, QuarterPeriodMakesTwoReplicas) {
  const KickedRotorParams params(1.0, 4.0 * kPi);
  auto s = make_gaussian_packet(kPi / 2, 0.1, 0.0, 1024);
  auto rho0 = density(s);
  auto rho = density(free_evolve(s, params, 0.25));
  const double peak0 = *std::max_element(rho0.begin(), rho0.end());
  auto peaks = local_maxima(rho, 0.1 * peak0);
  ASSERT_EQ(peaks.size(), 2u);
  EXPECT_NEAR(grid_point(peaks[1], 1024) - grid_point(peaks[0], 1024), kPi, 1e-12);
  EXPECT_NEAR(rho[peaks[0]], 0.5 * peak0, 1e-9 * peak0);
}

TEST(FreeEvolve, ExactRationalReductionMatchesDirectPhase) {
  // Small modes: both reductions agree to round-off.
  for (int m : {-7, -1, 0, 3, 12}) {
    const long double exact = free_phase_angle(m, 0.2, 4.0 * kPi, 1.0);
    const long double direct = 0.5L * 4.0L * 3.141592653589793238462643383279502884L * (m + 0.2L) * (m + 0.2L);
    EXPECT_NEAR(static_cast<double>(std::remainder(exact - direct, 2.0L * 3.141592653589793238462643383279502884L)),
                0.0, 1e-14);
  }
}

TEST(Kick, ZeroKappaIsIdentity) {
  auto s = make_gaussian_packet(0.4, 0.1, 0.2, 256);
  EXPECT_LT(max_abs_diff(kick(s, KickedRotorParams(0.0, 1.0)), s), 1e-15);
}

TEST(Kick, PlaneWaveGivesBesselLadder) {
  for (double kappa : {0.5, 1.0, 3.7}) {
    auto kicked = kick(make_plane_wave(0, 0.0, 128), KickedRotorParams(kappa, 1.0));
    auto ladder = to_momentum(kicked);
    for (int m = -20; m <= 20; ++m) {
      const cplx expected = std::pow(cplx(0.0, -1.0), m) * bessel_j(m, kappa);
      EXPECT_NEAR(std::abs(ladder.coefficients()[ladder.index(m)] - expected), 0.0, 1e-13) << m;
    }
  }
}

TEST(Kick, PreservesNormAndBeta) {
  auto s = make_gaussian_packet(0.4, 0.1, 0.3, 1024);
  auto k = kick(s, KickedRotorParams(10.0, 1.0));
  EXPECT_NEAR(norm_squared(k), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(k.beta(), 0.3);
}

TEST(Kick, AliasingGuardWarns) {
  Diagnostics diag;
  kick(make_gaussian_packet(0.4, 0.1, 0.0, 64), KickedRotorParams(30.0, 1.0), &diag);
  EXPECT_FALSE(diag.empty());
  Diagnostics quiet;
  kick(make_gaussian_packet(0.4, 0.1, 0.0, 1024), KickedRotorParams(1.0, 1.0), &quiet);
  EXPECT_TRUE(quiet.empty());
}

TEST(Evolve, PropagatorMatchesStepByStep) {
  const KickedRotorParams params(1.3, 2.1);
  auto start = make_gaussian_packet(0.7, 0.15, -0.3, 512);
  auto stepped = start;
  for (int t = 0; t < 12; ++t) stepped = floquet_step(stepped, params);
  auto fast = start;
  auto series = evolve(fast, params, 12);
  EXPECT_LT(max_abs_diff(fast, stepped), 1e-12);
  EXPECT_NEAR(series.p_mean.back(), mean_momentum_beta(stepped, params.hbar()), 1e-10);
  EXPECT_NEAR(series.e_mean.back(), kinetic_energy_beta(stepped, params.hbar()), 1e-9);
  EXPECT_DOUBLE_EQ(fast.beta(), -0.3);
}

TEST(Evolve, ZeroKickConstant) {
  auto s = make_gaussian_packet(0.7, 0.15, 0.2, 256);
  auto series = evolve(s, KickedRotorParams(0.0, 2.3), 40);
  for (std::size_t t = 0; t < series.size(); ++t) {
    EXPECT_NEAR(series.p_mean[t], series.p_mean[0], 1e-12);
    EXPECT_NEAR(series.e_mean[t], series.e_mean[0], 1e-10);
  }
}

TEST(Evolve, BallisticSlopeAtFourPi) {
  const double K = 2.0;
  auto s = make_gaussian_packet(kPi / 2, 0.1, 0.0, 1024);
  auto series = evolve(s, KickedRotorParams(K, 4.0 * kPi), 50);
  const double slope = linear_fit_window(series.p_mean, 1, 50).slope;
  EXPECT_NEAR(slope / (K * kSinMoment_pi2_s010), 1.0, 1e-6);
}

TEST(Evolve, AntiresonanceReturns) {
  auto s = make_gaussian_packet(kPi / 2, 0.1, 0.0, 512);
  auto series = evolve(s, KickedRotorParams(1.5, kTwoPi), 100);
  for (std::size_t t = 0; t < series.size(); t += 2) EXPECT_NEAR(series.p_mean[t], series.p_mean[0], 1e-10);
}

TEST(Evolve, UnitarityOverThousandKicks) {
  auto s = make_gaussian_packet(0.3, 0.1, 0.17, 1024);
  Diagnostics diag;
  auto series = evolve(s, KickedRotorParams(10.0, 1.0), 1000, true, &diag);
  for (double w : series.norm) EXPECT_NEAR(w, 1.0, 1e-10);
  EXPECT_TRUE(diag.empty());
}

TEST(Evolve, ValidatesInputs) {
  auto s = make_gaussian_packet(0.3, 0.1, 0.0, 256);
  EXPECT_THROW(evolve(s, KickedRotorParams(1.0, 1.0), -1), ValidationError);
  FloquetPropagator prop(KickedRotorParams(1.0, 1.0), 0.1, 256);
  EXPECT_THROW(prop.evolve(s, 3, true), ValidationError);
}
