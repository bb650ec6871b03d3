#include "qkr/sqr.hpp"

#include <cmath>

#include "qkr/errors.hpp"
#include "qkr/rational.hpp"

namespace qkr {
namespace {

constexpr long double kTwoPiL = 6.283185307179586476925286766559005768L;

bool near_resonance(double v) {
  return std::abs(std::sin(static_cast<double>(std::remainder(0.5L * v, kTwoPiL)))) <= kDirichletThreshold;
}

}  // namespace

std::string to_string(SqrClass c) {
  switch (c) {
    case SqrClass::Resonant: return "Resonant";
    case SqrClass::AntiResonant: return "AntiResonant";
    case SqrClass::Drifting: return "Drifting";
  }
  return "?";
}

int sqr_order(double hbar) {
  if (!(std::isfinite(hbar) && hbar > 0.0)) throw ValidationError("hbar must be finite and > 0");
  const double ratio = hbar / kTwoPi;
  const double ell = std::round(ratio);
  if (ell < 1.0 || std::abs(ratio - ell) > 1e-12 * ell) {
    throw ValidationError("hbar = " + std::to_string(hbar) + " is not a simple resonance 2 pi ell");
  }
  return static_cast<int>(ell);
}

double drift_velocity(int ell, double beta) {
  if (ell < 1) throw ValidationError("resonance order ell must be >= 1");
  return kTwoPi * ell * (beta + 0.5);
}

SqrRegime classify_sqr(int ell, double beta) {
  const double v = drift_velocity(ell, beta);
  // v / 2 pi = ell (beta + 1/2), only its fractional part matters.
  const double x = ell * (beta + 0.5);
  const double frac = x - std::floor(x);
  SqrRegime regime{ell, beta, v, SqrClass::Drifting, 0, 0};
  if (const auto r = rational_approximation(frac, kSqrMaxDenominator, kSqrRationalTol)) {
    regime.p = static_cast<long>(r->p % r->q);
    regime.q = static_cast<long>(r->q);
    regime.classification = (r->q == 1) ? SqrClass::Resonant : SqrClass::AntiResonant;
  }
  return regime;
}

double accumulated_phase(double x, double v, int t) {
  if (t < 0) throw ValidationError("kick count must be >= 0");
  if (t == 0) return 0.0;
  const long double half = 0.5L * v;
  const double s_half = std::sin(static_cast<double>(std::remainder(half, kTwoPiL)));
  if (std::abs(s_half) <= kDirichletThreshold) {
    double acc = 0.0;
    for (int s = 0; s < t; ++s) {
      acc += std::cos(static_cast<double>(std::remainder(x - static_cast<long double>(v) * s, kTwoPiL)));
    }
    return acc;
  }
  const double s_t = std::sin(static_cast<double>(std::remainder(half * t, kTwoPiL)));
  const double c = std::cos(static_cast<double>(std::remainder(x - half * (t - 1), kTwoPiL)));
  return s_t / s_half * c;
}

std::vector<double> accumulated_phase(std::span<const double> x, double v, int t) {
  std::vector<double> phi;
  phi.reserve(x.size());
  for (double xi : x) phi.push_back(accumulated_phase(xi, v, t));
  return phi;
}

cplx dirichlet_sum(double v, int t) {
  if (t < 0) throw ValidationError("kick count must be >= 0");
  if (t == 0) return 0.0;
  if (near_resonance(v)) {
    cplx acc = 0.0;
    for (int n = 1; n <= t; ++n) acc += unit_phase(static_cast<long double>(v) * n);
    return acc;
  }
  const long double half = 0.5L * v;
  const double ratio = std::sin(static_cast<double>(std::remainder(half * t, kTwoPiL))) /
                       std::sin(static_cast<double>(std::remainder(half, kTwoPiL)));
  return ratio * unit_phase(half * (t + 1));
}

SqrClosedForm closed_form_state(const BlochWaveState& psi0, const KickedRotorParams& params, int t) {
  if (t < 0) throw ValidationError("kick count must be >= 0");
  const int ell = sqr_order(params.hbar());
  const double beta = psi0.beta();
  const double v = drift_velocity(ell, beta);
  BlochWaveState shifted = translate(psi0, v * t);
  auto samples = shifted.samples();
  const double kappa = params.kappa();
  for (std::size_t j = 0; j < samples.size(); ++j) {
    samples[j] *= std::polar(1.0, -kappa * accumulated_phase(grid_point(j, samples.size()), v, t));
  }
  const long double g_angle = 0.5L * params.hbar() * beta * (beta + 1.0L);
  return {std::move(shifted), unit_phase(g_angle * t)};
}

SqrMoments sqr_moments(const BlochWaveState& psi0, double hbar) {
  SqrMoments m{};
  m.p0 = mean_momentum_beta(psi0, hbar);
  m.e0 = kinetic_energy_beta(psi0, hbar);
  m.f1 = position_moment(psi0, 1);
  m.f2 = position_moment(psi0, 2);
  const auto current = probability_current(psi0, hbar);
  cplx g = 0.0;
  for (std::size_t j = 0; j < current.size(); ++j) {
    g += current[j] * std::polar(1.0, grid_point(j, current.size()));
  }
  m.g1 = g * psi0.dx();
  return m;
}

ObservableSeries sqr_series(const SqrMoments& moments, double K, double v, int t_max) {
  if (t_max < 0) throw ValidationError("t_max must be >= 0");
  ObservableSeries series;
  for (int t = 0; t <= t_max; ++t) {
    const cplx a = dirichlet_sum(v, t);
    series.times.push_back(t);
    series.p_mean.push_back(moments.p0 + K * std::imag(a * moments.f1));
    series.e_mean.push_back(moments.e0 + 0.25 * K * K * (std::norm(a) - std::real(a * a * moments.f2)) +
                            K * std::imag(a * moments.g1));
  }
  return series;
}

ObservableSeries momentum_series_sqr(const BlochWaveState& psi0, const KickedRotorParams& params,
                                     int t_max) {
  const int ell = sqr_order(params.hbar());
  auto series = sqr_series(sqr_moments(psi0, params.hbar()), params.K(), drift_velocity(ell, psi0.beta()), t_max);
  series.e_mean.clear();
  return series;
}

ObservableSeries energy_series_sqr(const BlochWaveState& psi0, const KickedRotorParams& params,
                                   int t_max) {
  const int ell = sqr_order(params.hbar());
  auto series = sqr_series(sqr_moments(psi0, params.hbar()), params.K(), drift_velocity(ell, psi0.beta()), t_max);
  series.p_mean.clear();
  return series;
}

ClassicalState mean_value_map(double x0, double p0, double K, double v, int t) {
  if (t < 0) throw ValidationError("kick count must be >= 0");
  const double x_t = static_cast<double>(static_cast<long double>(x0) + static_cast<long double>(v) * t);
  return {x_t, p0 + K * std::imag(dirichlet_sum(v, t) * std::polar(1.0, x0))};
}

}  // namespace qkr
