#pragma once

#include <cstddef>
#include <vector>

#include "qkr/bloch_state.hpp"
#include "qkr/observable_series.hpp"
#include "qkr/params.hpp"

namespace qkr {

inline constexpr int kMinBetaNodes = 32;

/// beta_i = -1/2 + (i + 1/2) / n_beta, i = 0..n_beta-1.
std::vector<double> beta_midpoints(int n_beta);

/// Spatial envelope shared by every Bloch component: a Gaussian confined to
/// one cell, so psi_beta(X, 0) on [-pi, pi) does not depend on beta.
struct EnvelopeSpec {
  double x0;
  double sigma;
  std::size_t n_grid;
};

enum class AverageMode { ClosedForm, Propagator };

/// Mean of <P>_beta(t) and <E>_beta(t) over the beta nodes, t = 0..t_max.
/// ClosedForm requires hbar = 2 pi ell. Results are reduced in node order and
/// do not depend on `jobs`.
ObservableSeries average_over_beta(const EnvelopeSpec& envelope, const KickedRotorParams& params,
                                   int n_beta, int t_max, AverageMode mode, int jobs = 1);

/// Same, with caller-supplied initial states (one per midpoint node, in node
/// order). Rejects the set unless every state has the same samples on the
/// fundamental cell to 1e-8 relative.
ObservableSeries average_over_beta(const std::vector<BlochWaveState>& initial,
                                   const KickedRotorParams& params, int t_max, AverageMode mode,
                                   int jobs = 1);

struct AveragedSlope {
  double analytic;    // K^2 / 4
  double quadrature;  // linear fit of the beta-averaged closed-form energy over t in [1, t_max]
};

AveragedSlope averaged_energy_slope_sqr(const EnvelopeSpec& envelope, double K, int ell, int t_max,
                                        int n_beta, int jobs = 1);

}  // namespace qkr
