#include "qkr/classical_map.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "qkr/errors.hpp"
#include "qkr/parallel.hpp"

namespace qkr {
namespace {

constexpr long double kTwoPiL = 6.283185307179586476925286766559005768L;
constexpr std::size_t kChunk = 4096;

double reduced_sin(long double x) {
  return static_cast<double>(std::sin(std::remainder(x, kTwoPiL)));
}

}  // namespace

ClassicalState standard_map_step(ClassicalState s, double K) {
  const long double x = static_cast<long double>(s.X) + s.P;
  const double next_x = static_cast<double>(x);
  return {next_x, s.P + K * reduced_sin(x)};
}

std::vector<ClassicalState> standard_map_orbit(ClassicalState s0, double K, int steps) {
  if (steps < 0) throw ValidationError("orbit length must be >= 0");
  std::vector<ClassicalState> orbit;
  orbit.reserve(static_cast<std::size_t>(steps) + 1);
  orbit.push_back(s0);
  for (int t = 0; t < steps; ++t) orbit.push_back(standard_map_step(orbit.back(), K));
  return orbit;
}

std::array<double, 4> standard_map_jacobian(ClassicalState s, double K) {
  // X' = X + P, P' = P + K sin(X + P)
  const double c = K * std::cos(static_cast<double>(std::remainder(static_cast<long double>(s.X) + s.P, kTwoPiL)));
  return {1.0, 1.0, c, 1.0 + c};
}

ObservableSeries ensemble_energy_series(int n_particles, double K, int t_max, std::uint64_t seed,
                                        int jobs) {
  if (n_particles < 1000) throw ValidationError("ensemble needs at least 1000 particles");
  if (t_max < 0) throw ValidationError("t_max must be >= 0");
  if (!std::isfinite(K)) throw ValidationError("K must be finite");

  const auto total = static_cast<std::size_t>(n_particles);
  const std::size_t chunks = (total + kChunk - 1) / kChunk;
  const auto steps = static_cast<std::size_t>(t_max) + 1;

  auto partial = parallel_map<std::vector<double>>(chunks, jobs, [&](std::size_t c) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> uniform(-std::numbers::pi, std::numbers::pi);
    std::vector<double> sums(steps, 0.0);
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(total, begin + kChunk);
    for (std::size_t i = begin; i < end; ++i) {
      ClassicalState s{uniform(rng), uniform(rng)};
      sums[0] += 0.5 * s.P * s.P;
      for (std::size_t t = 1; t < steps; ++t) {
        s = standard_map_step(s, K);
        sums[t] += 0.5 * s.P * s.P;
      }
    }
    return sums;
  });

  ObservableSeries series;
  series.times.resize(steps);
  series.e_mean.assign(steps, 0.0);
  for (std::size_t t = 0; t < steps; ++t) series.times[t] = static_cast<int>(t);
  for (const auto& sums : partial) {
    for (std::size_t t = 0; t < steps; ++t) series.e_mean[t] += sums[t];
  }
  for (auto& e : series.e_mean) e /= static_cast<double>(total);
  return series;
}

}  // namespace qkr
