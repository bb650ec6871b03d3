#pragma once

#include <cstddef>
#include <vector>

#include "qkr/bloch_state.hpp"
#include "qkr/errors.hpp"
#include "qkr/observable_series.hpp"
#include "qkr/params.hpp"

namespace qkr {

/// Ladder weight allowed within the guard margin before a warning is issued.
inline constexpr double kAliasingThreshold = 1e-10;
inline constexpr int kAliasingMargin = 4;
/// evolve() aborts when |norm^2 - initial norm^2| exceeds this.
inline constexpr double kNormGuard = 1e-8;

/// Free flight over a fraction tau of the period: ladder mode m picks up
/// exp(-i hbar (m + beta)^2 tau / 2). Requires 0 < tau <= 1.
BlochWaveState free_evolve(const BlochWaveState& state, const KickedRotorParams& params, double tau);

/// Multiplies by exp(-i kappa cos X). Warns through `diag` when the kicked
/// ladder has more than kAliasingThreshold weight near the grid edge.
BlochWaveState kick(const BlochWaveState& state, const KickedRotorParams& params,
                    Diagnostics* diag = nullptr);

/// Free flight over one period, then the kick. Time t labels the state just
/// after kick t.
BlochWaveState floquet_step(const BlochWaveState& state, const KickedRotorParams& params,
                            Diagnostics* diag = nullptr);

/// Split-operator Floquet evolution for fixed (params, beta, N).
///
/// The kick and free-flight factors are tabulated once. Each period costs one
/// forward and one backward FFT, acting on the periodic part u = psi e^{-i beta X}.
/// When hbar/pi is a small-denominator rational the free phase is reduced
/// exactly in integer arithmetic, which keeps Talbot revivals at round-off
/// level for large mode numbers.
class FloquetPropagator {
 public:
  FloquetPropagator(const KickedRotorParams& params, double beta, std::size_t n_grid);

  const KickedRotorParams& params() const { return params_; }
  double beta() const { return beta_; }
  std::size_t n_grid() const { return n_grid_; }

  /// Advances `state` by t_kicks periods in place. With `record`, returns
  /// <P>, <E> and norm^2 at t = 0..t_kicks; otherwise only the times.
  /// Throws NumericalGuardError when the norm drifts beyond kNormGuard.
  ObservableSeries evolve(BlochWaveState& state, int t_kicks, bool record,
                          Diagnostics* diag = nullptr) const;

 private:
  KickedRotorParams params_;
  double beta_;
  std::size_t n_grid_;
  std::vector<cplx> free_phase_;  // FFT order, includes 1/N
  std::vector<cplx> kick_phase_;
  std::vector<double> momentum_;  // (m + beta) hbar in FFT order
};

/// Convenience wrapper around FloquetPropagator.
ObservableSeries evolve(BlochWaveState& state, const KickedRotorParams& params, int t_kicks,
                        bool record = true, Diagnostics* diag = nullptr);

/// Free-flight phase hbar (m + beta)^2 tau / 2 reduced modulo 2 pi. Exact
/// integer reduction is used for the m^2 part when hbar/pi = p/q (q <= 64).
long double free_phase_angle(int m, double beta, double hbar, double tau);

}  // namespace qkr
