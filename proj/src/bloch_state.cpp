#include "qkr/bloch_state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "qkr/errors.hpp"
#include "qkr/fft.hpp"

namespace qkr {

bool is_valid_grid_size(std::size_t n) { return n >= kMinGrid && std::has_single_bit(n); }

double canonical_beta(double beta) {
  if (!std::isfinite(beta)) throw ValidationError("beta must be finite");
  if (beta == 0.5) return -0.5;
  if (beta < -0.5 || beta >= 0.5) {
    throw ValidationError("beta must lie in [-1/2, 1/2), got " + std::to_string(beta));
  }
  return beta;
}

double grid_point(std::size_t j, std::size_t n) {
  return -kPi + kTwoPi * static_cast<double>(j) / static_cast<double>(n);
}

std::vector<double> grid_points(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = grid_point(j, n);
  return x;
}

cplx unit_phase(long double angle) {
  constexpr long double two_pi = 6.283185307179586476925286766559005768L;
  const long double reduced = std::remainder(angle, two_pi);
  const double a = static_cast<double>(reduced);
  return {std::cos(a), std::sin(a)};
}

BlochWaveState::BlochWaveState(std::vector<cplx> samples, double beta, double drift_offset)
    : samples_(std::move(samples)), beta_(canonical_beta(beta)), drift_offset_(drift_offset) {
  if (!is_valid_grid_size(samples_.size())) {
    throw ValidationError("grid size must be a power of two >= 32, got " +
                          std::to_string(samples_.size()));
  }
  if (!std::isfinite(drift_offset)) throw ValidationError("drift_offset must be finite");
}

MomentumLadder::MomentumLadder(std::vector<cplx> coefficients, double beta)
    : coefficients_(std::move(coefficients)), beta_(canonical_beta(beta)) {
  if (coefficients_.size() < 2 || !std::has_single_bit(coefficients_.size())) {
    throw ValidationError("ladder size must be a power of two");
  }
}

double MomentumLadder::weight() const {
  double w = 0.0;
  for (const auto& c : coefficients_) w += std::norm(c);
  return w;
}

namespace {

void require_grid(std::size_t n) {
  if (!is_valid_grid_size(n)) {
    throw ValidationError("grid size must be a power of two >= 32, got " + std::to_string(n));
  }
}

void normalize(std::vector<cplx>& samples) {
  double w = 0.0;
  for (const auto& s : samples) w += std::norm(s);
  const double scale = 1.0 / std::sqrt(w * kTwoPi / static_cast<double>(samples.size()));
  for (auto& s : samples) s *= scale;
}

void check_packet_args(double x0, double sigma) {
  if (!std::isfinite(x0)) throw ValidationError("packet centre must be finite");
  if (!(sigma > 0.0 && sigma < kPi / 4.0)) {
    throw ValidationError("packet width must satisfy 0 < sigma < pi/4, got " + std::to_string(sigma));
  }
}

int image_count(double sigma) { return static_cast<int>(std::ceil(8.0 * sigma / kTwoPi)) + 2; }

}  // namespace

BlochWaveState make_gaussian_packet(double x0, double sigma, double beta, std::size_t n_grid) {
  check_packet_args(x0, sigma);
  const double canonical = canonical_beta(beta);
  require_grid(n_grid);
  const int images = image_count(sigma);
  std::vector<cplx> samples(n_grid);
  for (std::size_t j = 0; j < n_grid; ++j) {
    const double x = grid_point(j, n_grid);
    double envelope = 0.0;
    for (int k = -images; k <= images; ++k) {
      const double d = x - x0 + kTwoPi * k;
      envelope += std::exp(-d * d / (4.0 * sigma * sigma));
    }
    // Phase from the requested beta; +1/2 and -1/2 describe the same Bloch class.
    samples[j] = envelope * std::polar(1.0, beta * x);
  }
  normalize(samples);
  return BlochWaveState(std::move(samples), canonical);
}

BlochWaveState make_cell_localized_packet(double x0, double sigma, double beta, std::size_t n_grid) {
  check_packet_args(x0, sigma);
  const double canonical = canonical_beta(beta);
  require_grid(n_grid);
  const int images = image_count(sigma);
  std::vector<cplx> samples(n_grid);
  for (std::size_t j = 0; j < n_grid; ++j) {
    const double x = grid_point(j, n_grid);
    cplx value = 0.0;
    for (int k = -images; k <= images; ++k) {
      const double d = x - x0 + kTwoPi * k;
      value += std::exp(-d * d / (4.0 * sigma * sigma)) * std::polar(1.0, -kTwoPi * k * beta);
    }
    samples[j] = value;
  }
  normalize(samples);
  return BlochWaveState(std::move(samples), canonical);
}

BlochWaveState make_plane_wave(int m0, double beta, std::size_t n_grid) {
  require_grid(n_grid);
  const double canonical = canonical_beta(beta);
  std::vector<cplx> samples(n_grid);
  const double amp = 1.0 / std::sqrt(kTwoPi);
  for (std::size_t j = 0; j < n_grid; ++j) {
    const long double x = grid_point(j, n_grid);
    samples[j] = amp * unit_phase((static_cast<long double>(m0) + canonical) * x);
  }
  return BlochWaveState(std::move(samples), canonical);
}

MomentumLadder to_momentum(const BlochWaveState& state) {
  const std::size_t n = state.n_grid();
  const double beta = state.beta();
  std::vector<cplx> u(n);
  auto samples = state.samples();
  for (std::size_t j = 0; j < n; ++j) {
    u[j] = samples[j] * std::polar(1.0, -beta * grid_point(j, n));
  }
  fft::forward(u);
  // e^{-i m X_j} = (-1)^m e^{-2 pi i m j / N} on the grid starting at -pi.
  const double scale = std::sqrt(kTwoPi) / static_cast<double>(n);
  std::vector<cplx> coeffs(n);
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = (i + half) % n;
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;  // (-1)^m with m = i - N/2, N/2 even
    coeffs[i] = scale * sign * u[k];
  }
  return MomentumLadder(std::move(coeffs), beta);
}

BlochWaveState to_position(const MomentumLadder& ladder, std::size_t n_grid, double drift_offset) {
  require_grid(n_grid);
  const double beta = ladder.beta();
  const auto coeffs = ladder.coefficients();
  const int lo = -static_cast<int>(n_grid / 2);
  const int hi = static_cast<int>(n_grid / 2);
  std::vector<cplx> g(n_grid, cplx{0.0, 0.0});
  double dropped = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const int m = ladder.mode(i);
    if (m < lo || m >= hi) {
      dropped += std::norm(coeffs[i]);
      continue;
    }
    const std::size_t k = static_cast<std::size_t>((m + static_cast<int>(n_grid)) % static_cast<int>(n_grid));
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    g[k] = sign * coeffs[i];
  }
  if (dropped > 1e-10) {
    throw ValidationError("resampling to " + std::to_string(n_grid) +
                          " points would drop ladder weight " + std::to_string(dropped));
  }
  fft::backward(g);
  const double scale = 1.0 / std::sqrt(kTwoPi);
  for (std::size_t j = 0; j < n_grid; ++j) {
    g[j] *= scale * std::polar(1.0, beta * grid_point(j, n_grid));
  }
  return BlochWaveState(std::move(g), beta, drift_offset);
}

BlochWaveState translate(const BlochWaveState& state, double shift) {
  auto ladder = to_momentum(state);
  auto coeffs = ladder.coefficients();
  const long double beta = ladder.beta();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const long double k = static_cast<long double>(ladder.mode(i)) + beta;
    coeffs[i] *= unit_phase(-k * static_cast<long double>(shift));
  }
  return to_position(ladder, state.n_grid(), state.drift_offset() + shift);
}

double norm_squared(const BlochWaveState& state) {
  double w = 0.0;
  for (const auto& s : state.samples()) w += std::norm(s);
  return w * state.dx();
}

cplx inner_product(const BlochWaveState& a, const BlochWaveState& b) {
  if (a.n_grid() != b.n_grid()) throw ValidationError("inner product of states on different grids");
  cplx acc = 0.0;
  auto sa = a.samples();
  auto sb = b.samples();
  for (std::size_t j = 0; j < sa.size(); ++j) acc += std::conj(sa[j]) * sb[j];
  return acc * a.dx();
}

double fidelity(const BlochWaveState& a, const BlochWaveState& b) {
  return std::norm(inner_product(a, b)) / (norm_squared(a) * norm_squared(b));
}

std::vector<double> density(const BlochWaveState& state) {
  std::vector<double> rho;
  rho.reserve(state.n_grid());
  for (const auto& s : state.samples()) rho.push_back(std::norm(s));
  return rho;
}

double mean_momentum_beta(const BlochWaveState& state, double hbar) {
  const auto ladder = to_momentum(state);
  const auto coeffs = ladder.coefficients();
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    acc += (ladder.mode(i) + ladder.beta()) * std::norm(coeffs[i]);
  }
  return hbar * acc;
}

double kinetic_energy_beta(const BlochWaveState& state, double hbar) {
  const auto ladder = to_momentum(state);
  const auto coeffs = ladder.coefficients();
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const double k = ladder.mode(i) + ladder.beta();
    acc += k * k * std::norm(coeffs[i]);
  }
  return 0.5 * hbar * hbar * acc;
}

std::vector<double> probability_current(const BlochWaveState& state, double hbar) {
  auto ladder = to_momentum(state);
  auto coeffs = ladder.coefficients();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    coeffs[i] *= cplx{0.0, ladder.mode(i) + ladder.beta()};
  }
  const auto derivative = to_position(ladder, state.n_grid());
  auto psi = state.samples();
  auto dpsi = derivative.samples();
  std::vector<double> current(state.n_grid());
  for (std::size_t j = 0; j < current.size(); ++j) {
    current[j] = hbar * std::imag(std::conj(psi[j]) * dpsi[j]);
  }
  return current;
}

cplx position_moment(const BlochWaveState& state, int k) {
  const std::size_t n = state.n_grid();
  auto samples = state.samples();
  cplx acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    acc += std::norm(samples[j]) * std::polar(1.0, k * grid_point(j, n));
  }
  return acc * state.dx();
}

double circular_mean_position(const BlochWaveState& state) {
  return std::arg(position_moment(state, 1));
}

double unfolded_mean_position(const BlochWaveState& state) {
  const double offset = state.drift_offset();
  return offset + std::remainder(circular_mean_position(state) - offset, kTwoPi);
}

double edge_occupancy(const MomentumLadder& ladder, int margin) {
  const auto coeffs = ladder.coefficients();
  const std::size_t n = coeffs.size();
  const std::size_t edge = std::min<std::size_t>(static_cast<std::size_t>(std::max(margin, 0)), n / 2);
  double w = 0.0;
  for (std::size_t i = 0; i < edge; ++i) w += std::norm(coeffs[i]) + std::norm(coeffs[n - 1 - i]);
  return w;
}

}  // namespace qkr
