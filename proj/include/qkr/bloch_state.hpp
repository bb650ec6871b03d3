#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace qkr {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Smallest grid the state type accepts.
inline constexpr std::size_t kMinGrid = 32;

bool is_valid_grid_size(std::size_t n);

/// Maps beta into the half-open zone [-1/2, 1/2). +1/2 is folded onto -1/2;
/// anything else outside the zone is rejected.
double canonical_beta(double beta);

/// X_j = -pi + 2 pi j / n.
double grid_point(std::size_t j, std::size_t n);
std::vector<double> grid_points(std::size_t n);

/// exp(i angle) with the angle reduced modulo 2 pi in extended precision.
/// Large arguments (high momentum modes, long drifts) keep their phase to
/// ~1e-16 instead of losing digits in the double reduction inside std::sin.
cplx unit_phase(long double angle);

/// A Bloch wave psi_beta sampled on the uniform grid over one spatial period.
///
/// The samples hold psi itself, Bloch phase e^{i beta X} included. The
/// periodic part u_beta = psi e^{-i beta X} is what the momentum transforms
/// act on. drift_offset accumulates analytic translations so the unfolded
/// mean position can be recovered from the periodic grid.
class BlochWaveState {
 public:
  BlochWaveState(std::vector<cplx> samples, double beta, double drift_offset = 0.0);

  std::size_t n_grid() const { return samples_.size(); }
  double beta() const { return beta_; }
  double drift_offset() const { return drift_offset_; }
  void set_drift_offset(double offset) { drift_offset_ = offset; }

  std::span<const cplx> samples() const { return samples_; }
  std::span<cplx> samples() { return samples_; }

  double dx() const { return kTwoPi / static_cast<double>(samples_.size()); }

 private:
  std::vector<cplx> samples_;
  double beta_;
  double drift_offset_;
};

/// Coefficients psi~_beta(m) of the momentum ladder P = (m + beta) hbar,
/// stored in increasing m from -N/2 to N/2 - 1.
class MomentumLadder {
 public:
  MomentumLadder(std::vector<cplx> coefficients, double beta);

  std::size_t size() const { return coefficients_.size(); }
  double beta() const { return beta_; }
  std::span<const cplx> coefficients() const { return coefficients_; }
  std::span<cplx> coefficients() { return coefficients_; }

  int min_mode() const { return -static_cast<int>(coefficients_.size() / 2); }
  int mode(std::size_t index) const { return static_cast<int>(index) + min_mode(); }
  std::size_t index(int m) const { return static_cast<std::size_t>(m - min_mode()); }

  /// Sum of |psi~(m)|^2.
  double weight() const;

 private:
  std::vector<cplx> coefficients_;
  double beta_;
};

// -- construction ----------------------------------------------------------

/// Periodically wrapped Gaussian psi ∝ e^{i beta X} sum_k exp(-(X - X0 + 2 pi k)^2 / (4 sigma^2)),
/// normalized to one. Requires 0 < sigma < pi/4.
BlochWaveState make_gaussian_packet(double x0, double sigma, double beta, std::size_t n_grid);

/// Bloch component of a single-well Gaussian: psi_beta(X) = sum_k g(X - X0 + 2 pi k) e^{-2 pi i k beta}.
/// On the fundamental cell it equals g(X - X0) for every beta, which is the
/// beta-independent initial condition used for quasimomentum averages.
BlochWaveState make_cell_localized_packet(double x0, double sigma, double beta, std::size_t n_grid);

/// e^{i (m0 + beta) X} / sqrt(2 pi).
BlochWaveState make_plane_wave(int m0, double beta, std::size_t n_grid);

// -- representations --------------------------------------------------------

MomentumLadder to_momentum(const BlochWaveState& state);

/// Inverse of to_momentum. n_grid may differ from the ladder size: larger
/// grids zero-pad, smaller grids truncate (rejected if more than 1e-10 of the
/// weight would be dropped).
BlochWaveState to_position(const MomentumLadder& ladder, std::size_t n_grid, double drift_offset = 0.0);

/// psi(X) -> psi(X - shift), exact in the ladder basis. drift_offset += shift.
BlochWaveState translate(const BlochWaveState& state, double shift);

// -- observables ---------------------------------------------------------------

double norm_squared(const BlochWaveState& state);
cplx inner_product(const BlochWaveState& a, const BlochWaveState& b);
/// |<a|b>|^2 / (<a|a><b|b>)
double fidelity(const BlochWaveState& a, const BlochWaveState& b);
std::vector<double> density(const BlochWaveState& state);

double mean_momentum_beta(const BlochWaveState& state, double hbar);
double kinetic_energy_beta(const BlochWaveState& state, double hbar);

/// J(X) = i (hbar/2) (psi d_X psi* - c.c.) on the grid, spectral derivative.
std::vector<double> probability_current(const BlochWaveState& state, double hbar);

/// Integral of e^{i k X} |psi|^2 over one period.
cplx position_moment(const BlochWaveState& state, int k);

/// arg of the first circular moment, in (-pi, pi].
double circular_mean_position(const BlochWaveState& state);
/// drift_offset plus the circular mean folded to within pi of it.
double unfolded_mean_position(const BlochWaveState& state);

/// Ladder weight in the `margin` outermost modes at each end of the grid.
double edge_occupancy(const MomentumLadder& ladder, int margin = 4);

}  // namespace qkr
