#include "qkr/hqr.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

namespace qkr {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

cplx expi(double angle) { return std::polar(1.0, angle); }

void check_t(int t) {
  if (t < 0) throw ValidationError("kick count must be >= 0");
}

}  // namespace

HqrRegime make_hqr_regime(double beta, double kappa) {
  if (!std::isfinite(beta) || !std::isfinite(kappa)) throw ValidationError("beta and kappa must be finite");
  return {beta, kPi * beta, kappa};
}

double local_phase(double x, int t, const HqrRegime& regime) {
  const long double arg = static_cast<long double>(x) + static_cast<long double>(regime.w) * t;
  constexpr long double two_pi = 6.283185307179586476925286766559005768L;
  return regime.kappa * std::cos(static_cast<double>(std::remainder(arg, two_pi)));
}

Eigen::Matrix2cd kick_factor(double phi) {
  Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
  d(0, 0) = expi(-phi);
  d(1, 1) = expi(phi);
  return d;
}

Eigen::Matrix2cd free_factor(double beta) {
  const cplx i(0.0, 1.0);
  Eigen::Matrix2cd f;
  f << 1.0, i * expi(-beta * kPi), i * expi(beta * kPi), 1.0;
  return kInvSqrt2 * f;
}

Eigen::Matrix2cd transfer_matrix(double x, int t, const HqrRegime& regime) {
  return expi(-kPi / 4.0) * kick_factor(local_phase(x, t, regime)) * free_factor(regime.beta);
}

double eigenphase_theta(double phi) { return std::acos(std::cos(phi) * kInvSqrt2); }

std::pair<cplx, cplx> closed_form_amplitudes_beta0(double x, int t, double kappa) {
  check_t(t);
  const double phi = kappa * std::cos(x);
  const double theta = eigenphase_theta(phi);
  const double s_theta = std::sin(theta);
  const double st = std::sin(t * theta);
  const cplx global = expi(-t * kPi / 4.0);
  const cplx i(0.0, 1.0);
  const cplx c1 = global * (std::cos(t * theta) - i * kInvSqrt2 * (std::sin(phi) / s_theta) * st);
  const cplx c2 = i * kInvSqrt2 * (expi(phi) / s_theta) * global * st;
  return {c1, c2};
}

std::pair<cplx, cplx> amplitudes_at(double x, int t, const HqrRegime& regime) {
  check_t(t);
  Eigen::Vector2cd c(1.0, 0.0);
  for (int s = 1; s <= t; ++s) c = transfer_matrix(x, s, regime) * c;
  return {c(0), c(1)};
}

TwoLevelAmplitudes TwoLevelAmplitudes::initial(std::size_t n_grid) {
  return {std::vector<cplx>(n_grid, cplx{1.0, 0.0}), std::vector<cplx>(n_grid, cplx{0.0, 0.0}), 0};
}

TwoLevelAmplitudes step_amplitudes(const TwoLevelAmplitudes& amps, const HqrRegime& regime) {
  if (amps.c1.size() != amps.c2.size()) throw ValidationError("amplitude arrays differ in length");
  TwoLevelAmplitudes next{amps.c1, amps.c2, amps.t + 1};
  const std::size_t n = amps.c1.size();
  for (std::size_t j = 0; j < n; ++j) {
    const Eigen::Vector2cd c = transfer_matrix(grid_point(j, n), next.t, regime) *
                               Eigen::Vector2cd(amps.c1[j], amps.c2[j]);
    next.c1[j] = c(0);
    next.c2[j] = c(1);
  }
  return next;
}

int transfer_period(const HqrRegime& regime) {
  // Only phi depends on t, so comparing M_1 with M_{1+t_r} at a few points suffices.
  const double probes[] = {-2.9, -1.3, 0.2, 0.7, 1.9, 3.0};
  for (int tr = 1; tr <= kMaxTransferPeriod; ++tr) {
    double err = 0.0;
    for (double x : probes) {
      for (int t = 1; t <= 2; ++t) {
        err = std::max(err, (transfer_matrix(x, t + tr, regime) - transfer_matrix(x, t, regime)).cwiseAbs().maxCoeff());
      }
    }
    if (err < 1e-12) return tr;
  }
  return 0;
}

double subpacket_overlap(const BlochWaveState& psi0) {
  const auto s = psi0.samples();
  const std::size_t n = s.size();
  const std::size_t half = n / 2;
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += std::abs(s[j]) * std::abs(s[(j + half) % n]);
  return acc * psi0.dx();
}

BlochWaveState reconstruct_state(const TwoLevelAmplitudes& amps, const BlochWaveState& psi0,
                                 const HqrRegime& regime, Diagnostics* diag) {
  const std::size_t n = psi0.n_grid();
  if (amps.c1.size() != n || amps.c2.size() != n) {
    throw ValidationError("amplitude grid does not match the initial state");
  }
  if (diag != nullptr) {
    const double overlap = subpacket_overlap(psi0);
    if (overlap > kOverlapWarning) {
      diag->warn("two-level model: subpacket overlap " + std::to_string(overlap) + " exceeds " +
                 std::to_string(kOverlapWarning));
    }
  }
  const auto s = psi0.samples();
  const std::size_t half = n / 2;
  // psi0(X - 2 pi) = e^{-2 pi i beta} psi0(X)
  const cplx wrap = std::polar(1.0, -kTwoPi * psi0.beta());
  std::vector<cplx> psi(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx shifted = (j >= half) ? s[j - half] : s[j + half] * wrap;
    psi[j] = amps.c1[j] * s[j] + amps.c2[(j + half) % n] * shifted;
  }
  BlochWaveState unshifted(std::move(psi), psi0.beta(), psi0.drift_offset());
  BlochWaveState out = translate(unshifted, regime.w * amps.t);
  const cplx global = unit_phase(0.5L * kPi * regime.beta * regime.beta * amps.t);
  for (auto& v : out.samples()) v *= global;
  return out;
}

ObservableSeries momentum_series_hqr(double x0, double p0, const HqrRegime& regime, int t_max) {
  check_t(t_max);
  const double K = kPi * regime.kappa;
  ObservableSeries series;
  series.times.push_back(0);
  series.p_mean.push_back(p0);
  Eigen::Vector2cd c(1.0, 0.0);
  double p = p0;
  for (int t = 1; t <= t_max; ++t) {
    c = transfer_matrix(x0, t, regime) * c;
    const double force = std::sin(static_cast<double>(
        std::remainder(static_cast<long double>(x0) + static_cast<long double>(regime.w) * t,
                       6.283185307179586476925286766559005768L)));
    p += K * force * (1.0 - 2.0 * std::norm(c(1)));
    series.times.push_back(t);
    series.p_mean.push_back(p);
  }
  return series;
}

HqrMomentumSplit momentum_split_beta0(double x0, double K, double kappa, int t_max) {
  check_t(t_max);
  const double phi = kappa * std::cos(x0);
  const double theta = eigenphase_theta(phi);
  const double s2 = std::sin(phi) * std::sin(phi);
  HqrMomentumSplit split{hqr_slope(x0, K, kappa), {}};
  for (int t = 0; t <= t_max; ++t) {
    split.oscillatory.push_back(K * std::sin(x0) *
                                (std::sin((2 * t + 1) * theta) / (2.0 * std::sin(theta)) - 0.5) / (1.0 + s2));
  }
  return split;
}

double hqr_slope(double x0, double K, double kappa) {
  const double s = std::sin(kappa * std::cos(x0));
  return K * std::sin(x0) * s * s / (1.0 + s * s);
}

Eigen::Matrix2cd composite_transfer(double x, const HqrRegime& regime, int first, int count) {
  if (first < 0 || count < 0) throw ValidationError("composite range must be non-negative");
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
  for (int t = first; t < first + count; ++t) m = transfer_matrix(x, t, regime) * m;
  return m;
}

Eigen::Matrix2cd period4_composite(double x, double kappa) {
  return composite_transfer(x, make_hqr_regime(0.5, kappa), 1, 4);
}

double composite_slope(double x0, const HqrRegime& regime) {
  const int tr = transfer_period(regime);
  if (tr == 0) {
    throw ValidationError("transfer matrix has no period <= " + std::to_string(kMaxTransferPeriod));
  }
  const Eigen::Matrix2cd composite = composite_transfer(x0, regime, 1, tr);
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(composite);
  const Eigen::Vector2cd lambda = solver.eigenvalues();
  const Eigen::Matrix2cd vecs = solver.eigenvectors();
  const bool degenerate = std::abs(lambda(0) - lambda(1)) < 1e-10;
  const Eigen::Vector2cd c0(1.0, 0.0);
  // Eigenvectors of a unitary matrix with distinct eigenvalues are orthogonal.
  const Eigen::Vector2cd alpha = vecs.adjoint() * c0;

  const double K = kPi * regime.kappa;
  double acc = 0.0;
  Eigen::Matrix2cd partial = Eigen::Matrix2cd::Identity();
  for (int k = 1; k <= tr; ++k) {
    partial = transfer_matrix(x0, k, regime) * partial;
    double pop2 = 0.0;
    if (degenerate) {
      pop2 = std::norm((partial * c0)(1));
    } else {
      for (int j = 0; j < 2; ++j) {
        const Eigen::Vector2cd e = vecs.col(j) / vecs.col(j).norm();
        pop2 += std::norm(alpha(j)) / vecs.col(j).squaredNorm() * std::norm((partial * e)(1));
      }
    }
    const double force = std::sin(x0 + regime.w * k);
    acc += force * (1.0 - 2.0 * pop2);
  }
  return K * acc / tr;
}

}  // namespace qkr
