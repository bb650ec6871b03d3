#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qkr/observable_series.hpp"

namespace qkr {

/// Unfolded position X and momentum P, labelled just after a kick.
struct ClassicalState {
  double X;
  double P;
};

/// One iteration of Chirikov's standard map:
///   X_{t+1} = X_t + P_t,  P_{t+1} = P_t + K sin X_{t+1}.
/// X stays unfolded; the argument of sin is reduced modulo 2 pi in extended
/// precision.
ClassicalState standard_map_step(ClassicalState s, double K);

/// Orbit including the initial point: steps + 1 entries.
std::vector<ClassicalState> standard_map_orbit(ClassicalState s0, double K, int steps);

/// d(X', P') / d(X, P) of one step, row-major.
std::array<double, 4> standard_map_jacobian(ClassicalState s, double K);

/// Ensemble mean of P^2/2 after each step t = 0..t_max, for n_particles
/// started uniformly in [-pi, pi)^2. Particles are processed in fixed chunks,
/// each with its own generator seeded from (seed, chunk index), so the result
/// is identical for any `jobs`.
ObservableSeries ensemble_energy_series(int n_particles, double K, int t_max, std::uint64_t seed,
                                        int jobs = 1);

}  // namespace qkr
