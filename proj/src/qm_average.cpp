#include "qkr/qm_average.hpp"

#include <cmath>
#include <string>

#include "qkr/errors.hpp"
#include "qkr/fit.hpp"
#include "qkr/floquet.hpp"
#include "qkr/parallel.hpp"
#include "qkr/sqr.hpp"

namespace qkr {
namespace {

void check_nodes(int n_beta) {
  if (n_beta < kMinBetaNodes) {
    throw ValidationError("n_beta must be >= " + std::to_string(kMinBetaNodes));
  }
}

void check_envelopes(const std::vector<BlochWaveState>& initial) {
  const auto ref = initial.front().samples();
  double scale = 0.0;
  for (const auto& v : ref) scale = std::max(scale, std::abs(v));
  for (const auto& state : initial) {
    if (state.n_grid() != ref.size()) throw ValidationError("beta components use different grids");
    const auto s = state.samples();
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (std::abs(s[j] - ref[j]) > 1e-8 * scale) {
        throw ValidationError("beta components do not share one spatial envelope");
      }
    }
  }
}

}  // namespace

std::vector<double> beta_midpoints(int n_beta) {
  check_nodes(n_beta);
  std::vector<double> betas(static_cast<std::size_t>(n_beta));
  for (int i = 0; i < n_beta; ++i) betas[static_cast<std::size_t>(i)] = -0.5 + (i + 0.5) / n_beta;
  return betas;
}

ObservableSeries average_over_beta(const std::vector<BlochWaveState>& initial,
                                   const KickedRotorParams& params, int t_max, AverageMode mode,
                                   int jobs) {
  if (t_max < 0) throw ValidationError("t_max must be >= 0");
  check_nodes(static_cast<int>(initial.size()));
  const auto nodes = beta_midpoints(static_cast<int>(initial.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (std::abs(initial[i].beta() - nodes[i]) > 1e-14) {
      throw ValidationError("initial states must sit on the midpoint beta nodes");
    }
  }
  check_envelopes(initial);
  const int ell = (mode == AverageMode::ClosedForm) ? sqr_order(params.hbar()) : 0;

  auto runs = parallel_map<ObservableSeries>(initial.size(), jobs, [&](std::size_t i) {
    if (mode == AverageMode::ClosedForm) {
      return sqr_series(sqr_moments(initial[i], params.hbar()), params.K(),
                        drift_velocity(ell, initial[i].beta()), t_max);
    }
    BlochWaveState state = initial[i];
    return evolve(state, params, t_max, true);
  });

  ObservableSeries avg;
  const auto steps = static_cast<std::size_t>(t_max) + 1;
  avg.times = runs.front().times;
  avg.p_mean.assign(steps, 0.0);
  avg.e_mean.assign(steps, 0.0);
  for (const auto& run : runs) {
    for (std::size_t t = 0; t < steps; ++t) {
      avg.p_mean[t] += run.p_mean[t];
      avg.e_mean[t] += run.e_mean[t];
    }
  }
  const double inv = 1.0 / static_cast<double>(runs.size());
  for (std::size_t t = 0; t < steps; ++t) {
    avg.p_mean[t] *= inv;
    avg.e_mean[t] *= inv;
  }
  return avg;
}

ObservableSeries average_over_beta(const EnvelopeSpec& envelope, const KickedRotorParams& params,
                                   int n_beta, int t_max, AverageMode mode, int jobs) {
  std::vector<BlochWaveState> initial;
  for (double beta : beta_midpoints(n_beta)) {
    initial.push_back(make_cell_localized_packet(envelope.x0, envelope.sigma, beta, envelope.n_grid));
  }
  return average_over_beta(initial, params, t_max, mode, jobs);
}

AveragedSlope averaged_energy_slope_sqr(const EnvelopeSpec& envelope, double K, int ell, int t_max,
                                        int n_beta, int jobs) {
  if (ell < 1) throw ValidationError("resonance order ell must be >= 1");
  if (t_max < 2) throw ValidationError("slope fit needs t_max >= 2");
  const KickedRotorParams params(K, kTwoPi * ell);
  const auto avg = average_over_beta(envelope, params, n_beta, t_max, AverageMode::ClosedForm, jobs);
  return {0.25 * K * K, linear_fit_window(avg.e_mean, 1, t_max).slope};
}

}  // namespace qkr
