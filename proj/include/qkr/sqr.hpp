#pragma once

#include <span>
#include <string>
#include <vector>

#include "qkr/bloch_state.hpp"
#include "qkr/classical_map.hpp"
#include "qkr/observable_series.hpp"
#include "qkr/params.hpp"

namespace qkr {

/// Denominator cap and tolerance of the rationality test on v / 2 pi.
inline constexpr int kSqrMaxDenominator = 64;
inline constexpr double kSqrRationalTol = 1e-12;
/// Below this |sin(v/2)| Dirichlet sums are evaluated term by term.
inline constexpr double kDirichletThreshold = 1e-8;

enum class SqrClass { Resonant, AntiResonant, Drifting };

std::string to_string(SqrClass c);

/// Simple resonance hbar = 2 pi ell at quasimomentum beta.
struct SqrRegime {
  int ell;
  double beta;
  double v;              // 2 pi ell (beta + 1/2)
  SqrClass classification;
  long p;                // v / 2 pi = p / q when not Drifting
  long q;                // recurrence time t_r; 0 when Drifting
};

/// ell such that hbar = 2 pi ell (relative tolerance 1e-12); throws otherwise.
int sqr_order(double hbar);

double drift_velocity(int ell, double beta);

SqrRegime classify_sqr(int ell, double beta);

/// Phi(X, t) = sum_{s=0}^{t-1} cos(X - v s).
double accumulated_phase(double x, double v, int t);
std::vector<double> accumulated_phase(std::span<const double> x, double v, int t);

/// A_t = sum_{n=1}^{t} e^{i n v}.
cplx dirichlet_sum(double v, int t);

struct SqrClosedForm {
  /// Translated and phase-kicked state; drift_offset advanced by v t.
  BlochWaveState state;
  /// Unit scalar g^t, g = exp(i hbar beta (beta + 1) / 2), omitted from `state`.
  cplx global_phase;
};

/// psi(X, t) = g^t exp(-i kappa Phi(X, t)) psi0(X - v t).
SqrClosedForm closed_form_state(const BlochWaveState& psi0, const KickedRotorParams& params, int t);

/// Moments of the initial state entering the closed-form series.
struct SqrMoments {
  double p0;  // <P>(0)
  double e0;  // <E>(0)
  cplx f1;    // int e^{iX} |psi0|^2
  cplx f2;    // int e^{2iX} |psi0|^2
  cplx g1;    // int e^{iX} J(X, 0)
};

SqrMoments sqr_moments(const BlochWaveState& psi0, double hbar);

/// <P>(t) = <P>(0) + K Im(A_t F1) and
/// <E>(t) = <E>(0) + (K^2/4)(|A_t|^2 - Re(A_t^2 F2)) + K Im(A_t G1), for t = 0..t_max.
/// On exact resonance A_t = t, giving <P>(0) + D t and the quadratic energy law.
ObservableSeries sqr_series(const SqrMoments& moments, double K, double v, int t_max);

ObservableSeries momentum_series_sqr(const BlochWaveState& psi0, const KickedRotorParams& params,
                                     int t_max);
ObservableSeries energy_series_sqr(const BlochWaveState& psi0, const KickedRotorParams& params,
                                   int t_max);

/// Point-packet map: X_t = X0 + v t, P_t = P0 + K sum_{n=1}^{t} sin(X0 + n v).
ClassicalState mean_value_map(double x0, double p0, double K, double v, int t);

}  // namespace qkr
