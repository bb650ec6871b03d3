#include "qkr/floquet.hpp"

#include <cmath>
#include <string>

#include "qkr/fft.hpp"
#include "qkr/rational.hpp"

namespace qkr {
namespace {

constexpr long double kPiL = 3.141592653589793238462643383279502884L;

int fft_mode(std::size_t k, std::size_t n) {
  return k < n / 2 ? static_cast<int>(k) : static_cast<int>(k) - static_cast<int>(n);
}

void check_tau(double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw ValidationError("free-flight fraction must satisfy 0 < tau <= 1, got " + std::to_string(tau));
  }
}

void warn_aliasing(const MomentumLadder& ladder, Diagnostics* diag, const char* where) {
  if (diag == nullptr) return;
  const double edge = edge_occupancy(ladder, kAliasingMargin);
  if (edge > kAliasingThreshold) {
    diag->warn(std::string(where) + ": ladder weight " + std::to_string(edge) +
               " within " + std::to_string(kAliasingMargin) + " modes of the grid edge; increase N");
  }
}

}  // namespace

long double free_phase_angle(int m, double beta, double hbar, double tau) {
  const long double b = beta;
  const long double mm = m;
  if (const auto frac = rational_approximation(hbar / kPi, 64, 1e-13 * std::max(1.0, hbar / kPi))) {
    // hbar (m + beta)^2 / 2 = (pi p / 2q) (m^2 + 2 m beta + beta^2)
    const long double unit = kPiL * static_cast<long double>(frac->p) / (2.0L * frac->q);
    if (tau == 1.0) {
      const std::int64_t mod = 4 * frac->q;
      const std::int64_t m_mod = ((static_cast<std::int64_t>(m) % mod) + mod) % mod;
      const std::int64_t p_mod = ((frac->p % mod) + mod) % mod;
      const std::int64_t r = (m_mod * m_mod % mod) * p_mod % mod;
      return unit * (2.0L * mm * b + b * b) + kPiL * static_cast<long double>(r) / (2.0L * frac->q);
    }
    return unit * tau * (mm * mm + 2.0L * mm * b + b * b);
  }
  const long double k = mm + b;
  return 0.5L * hbar * tau * k * k;
}

BlochWaveState free_evolve(const BlochWaveState& state, const KickedRotorParams& params, double tau) {
  check_tau(tau);
  auto ladder = to_momentum(state);
  auto coeffs = ladder.coefficients();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    coeffs[i] *= unit_phase(-free_phase_angle(ladder.mode(i), ladder.beta(), params.hbar(), tau));
  }
  return to_position(ladder, state.n_grid(), state.drift_offset());
}

BlochWaveState kick(const BlochWaveState& state, const KickedRotorParams& params, Diagnostics* diag) {
  std::vector<cplx> samples(state.samples().begin(), state.samples().end());
  const double kappa = params.kappa();
  for (std::size_t j = 0; j < samples.size(); ++j) {
    samples[j] *= std::polar(1.0, -kappa * std::cos(grid_point(j, samples.size())));
  }
  BlochWaveState out(std::move(samples), state.beta(), state.drift_offset());
  if (diag != nullptr) warn_aliasing(to_momentum(out), diag, "kick");
  return out;
}

BlochWaveState floquet_step(const BlochWaveState& state, const KickedRotorParams& params,
                            Diagnostics* diag) {
  return kick(free_evolve(state, params, 1.0), params, diag);
}

FloquetPropagator::FloquetPropagator(const KickedRotorParams& params, double beta, std::size_t n_grid)
    : params_(params), beta_(canonical_beta(beta)), n_grid_(n_grid) {
  if (!is_valid_grid_size(n_grid)) {
    throw ValidationError("grid size must be a power of two >= 32, got " + std::to_string(n_grid));
  }
  free_phase_.resize(n_grid);
  kick_phase_.resize(n_grid);
  momentum_.resize(n_grid);
  const double inv_n = 1.0 / static_cast<double>(n_grid);
  for (std::size_t k = 0; k < n_grid; ++k) {
    const int m = fft_mode(k, n_grid);
    free_phase_[k] = inv_n * unit_phase(-free_phase_angle(m, beta_, params.hbar(), 1.0));
    momentum_[k] = (m + beta_) * params.hbar();
    kick_phase_[k] = std::polar(1.0, -params.kappa() * std::cos(grid_point(k, n_grid)));
  }
}

ObservableSeries FloquetPropagator::evolve(BlochWaveState& state, int t_kicks, bool record,
                                           Diagnostics* diag) const {
  if (t_kicks < 0) throw ValidationError("number of kicks must be >= 0");
  if (state.n_grid() != n_grid_) throw ValidationError("state grid does not match the propagator");
  if (canonical_beta(state.beta()) != beta_) {
    throw ValidationError("state quasimomentum does not match the propagator");
  }

  const std::size_t n = n_grid_;
  auto samples = state.samples();
  std::vector<cplx> bloch(n);
  std::vector<cplx> u(n);
  for (std::size_t j = 0; j < n; ++j) {
    bloch[j] = std::polar(1.0, beta_ * grid_point(j, n));
    u[j] = samples[j] * std::conj(bloch[j]);
  }

  ObservableSeries series;
  series.times.reserve(static_cast<std::size_t>(t_kicks) + 1);
  if (record) {
    series.p_mean.reserve(static_cast<std::size_t>(t_kicks) + 1);
    series.e_mean.reserve(static_cast<std::size_t>(t_kicks) + 1);
    series.norm.reserve(static_cast<std::size_t>(t_kicks) + 1);
  }

  // |psi~(m)|^2 = 2 pi |U_k|^2 / N^2 with U = FFT(u).
  const double weight_scale = kTwoPi / (static_cast<double>(n) * static_cast<double>(n));
  const std::size_t edge_lo = static_cast<std::size_t>(kAliasingMargin);
  double norm0 = -1.0;
  bool warned = false;

  auto observe = [&](int t) {
    double w = 0.0, p = 0.0, e = 0.0, edge = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double wk = std::norm(u[k]) * weight_scale;
      w += wk;
      p += momentum_[k] * wk;
      e += momentum_[k] * momentum_[k] * wk;
      // Modes m in [N/2 - margin, N/2) and [-N/2, -N/2 + margin).
      if ((k >= n / 2 - edge_lo && k < n / 2 + edge_lo)) edge += wk;
    }
    if (norm0 < 0.0) norm0 = w;
    if (std::abs(w - norm0) > kNormGuard) {
      throw NumericalGuardError("norm drifted by " + std::to_string(w - norm0) + " at kick " +
                                std::to_string(t));
    }
    if (diag != nullptr && !warned && edge > kAliasingThreshold) {
      warned = true;
      diag->warn("evolve: ladder weight " + std::to_string(edge) + " within " +
                 std::to_string(kAliasingMargin) + " modes of the grid edge at kick " +
                 std::to_string(t) + "; increase N");
    }
    series.times.push_back(t);
    if (record) {
      series.p_mean.push_back(p);
      series.e_mean.push_back(0.5 * e);
      series.norm.push_back(w);
    }
  };

  fft::forward(u);
  observe(0);
  for (int t = 1; t <= t_kicks; ++t) {
    for (std::size_t k = 0; k < n; ++k) u[k] *= free_phase_[k];
    fft::backward(u);
    for (std::size_t j = 0; j < n; ++j) u[j] *= kick_phase_[j];
    fft::forward(u);
    observe(t);
  }
  fft::backward(u);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) samples[j] = u[j] * inv_n * bloch[j];
  return series;
}

ObservableSeries evolve(BlochWaveState& state, const KickedRotorParams& params, int t_kicks, bool record,
                        Diagnostics* diag) {
  return FloquetPropagator(params, state.beta(), state.n_grid()).evolve(state, t_kicks, record, diag);
}

}  // namespace qkr
