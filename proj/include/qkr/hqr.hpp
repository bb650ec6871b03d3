#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "qkr/bloch_state.hpp"
#include "qkr/errors.hpp"
#include "qkr/observable_series.hpp"

namespace qkr {

/// Period search cap for rational beta.
inline constexpr int kMaxTransferPeriod = 128;
/// Subpacket overlap above which the two-level model is flagged.
inline constexpr double kOverlapWarning = 1e-6;

/// The hbar = pi resonance at quasimomentum beta: drift w = pi beta, local
/// phase phi(X, t) = kappa cos(X + w t). Any real beta is accepted; the
/// transfer matrix is written for general beta.
struct HqrRegime {
  double beta;
  double w;
  double kappa;
};

HqrRegime make_hqr_regime(double beta, double kappa);

double local_phase(double x, int t, const HqrRegime& regime);

/// M_t = e^{-i pi/4} diag(e^{-i phi}, e^{i phi}) F with the free-flight factor
/// F = (1/sqrt2) [[1, i e^{-i beta pi}], [i e^{i beta pi}, 1]].
Eigen::Matrix2cd transfer_matrix(double x, int t, const HqrRegime& regime);
Eigen::Matrix2cd kick_factor(double phi);
Eigen::Matrix2cd free_factor(double beta);

/// Theta = arccos(cos phi / sqrt2), in [pi/4, 3pi/4].
double eigenphase_theta(double phi);

/// Closed-form beta = 0 amplitudes (c1, c2) after t kicks, phi = kappa cos X.
std::pair<cplx, cplx> closed_form_amplitudes_beta0(double x, int t, double kappa);

/// (c1, c2) = M_t ... M_1 (1, 0) at a single point.
std::pair<cplx, cplx> amplitudes_at(double x, int t, const HqrRegime& regime);

/// c1(X, t) and c2(X - pi, t) on the grid X_j, stored so that index j of both
/// arrays refers to the same two-level system.
struct TwoLevelAmplitudes {
  std::vector<cplx> c1;
  std::vector<cplx> c2;
  int t = 0;

  static TwoLevelAmplitudes initial(std::size_t n_grid);
};

/// Applies M_{t+1} pointwise.
TwoLevelAmplitudes step_amplitudes(const TwoLevelAmplitudes& amps, const HqrRegime& regime);

/// Smallest t_r <= kMaxTransferPeriod with M_{t + t_r} = M_t to 1e-12, or 0.
int transfer_period(const HqrRegime& regime);

/// Integral of |psi0(X) psi0(X - pi)|.
double subpacket_overlap(const BlochWaveState& psi0);

/// psi(X + w t, t) = c1(X, t) psi0(X) + c2(X, t) psi0(X - pi), up to the
/// global phase e^{i pi beta^2 t / 2}, which is included. Warns through
/// `diag` when the subpackets overlap.
BlochWaveState reconstruct_state(const TwoLevelAmplitudes& amps, const BlochWaveState& psi0,
                                 const HqrRegime& regime, Diagnostics* diag = nullptr);

/// Point-packet momentum series, K = pi kappa:
///   <P>(t) = <P>(t-1) + K sin(X0 + w t) (1 - 2 |c2(X0 - pi, t)|^2).
ObservableSeries momentum_series_hqr(double x0, double p0, const HqrRegime& regime, int t_max);

/// beta = 0 split of the momentum series: <P>(t) = <P>(0) + D t + oscillatory(t).
struct HqrMomentumSplit {
  double slope;                     // D
  std::vector<double> oscillatory;  // K sin X0 (sin[(2t+1)Theta]/(2 sin Theta) - 1/2)/(1 + sin^2 phi)
};

HqrMomentumSplit momentum_split_beta0(double x0, double K, double kappa, int t_max);

/// D = K sin X0 sin^2 phi / (1 + sin^2 phi), phi = kappa cos X0.
double hqr_slope(double x0, double K, double kappa);

/// M_{first + count - 1} ... M_{first} at X.
Eigen::Matrix2cd composite_transfer(double x, const HqrRegime& regime, int first, int count);

/// M4 M3 M2 M1 for beta = 1/2.
Eigen::Matrix2cd period4_composite(double x, double kappa);

/// Long-time momentum slope for a point packet at X0 when M_t has period t_r:
/// the diagonal-ensemble population of the second subpacket over the
/// eigenbasis of the one-period composite, averaged across the period.
double composite_slope(double x0, const HqrRegime& regime);

}  // namespace qkr
