#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "qoe/entropy.hpp"
#include "qoe/network.hpp"
#include "qoe/spectral.hpp"

namespace qoe {

// Canonical ensemble over the energy eigenstates at temperature T
// (k_B = 1, T in units of gamma0).
struct ThermalEnsemble {
  double temperature = 0.0;
  ProbabilityDistribution occupation;
  std::string spectrum_ref;
};

// Equal positive amplitude on the n_init sites nearest the origin (distance
// ties by index); S_x comes out as log2(n_init) exactly.
PureState confined_state(const SiteSet& sites, int n_init);

// Random superposition of the lowest n_e energy eigenvectors: normal-deviate
// magnitudes normalized to unit length (Marsaglia), then uniform phases on
// [0, 2pi), magnitudes before phases in index order.
PureState rasee(const Spectrum& s, int n_e, std::uint64_t seed);

// Same construction straight in the position basis.
PureState random_position_superposition(int n, std::uint64_t seed);

// (psi0 + sqrt(delta) * noise), renormalized. delta in [0, 1]; delta = 0
// returns psi0 unchanged. Near-total cancellation is a degenerate-input
// error rather than a silently amplified remainder.
PureState perturbed_initial_state(const PureState& psi0,
                                  const PureState& noise, double delta);

// Boltzmann occupation over eigenstates, ground-shifted so the weights stay
// finite at small T. thermal_density builds rho = V diag(occ) V^T from the
// same occupation path.
ProbabilityDistribution boltzmann_distribution(const Spectrum& s,
                                               double temperature);
std::pair<ThermalEnsemble, DensityMatrix> thermal_density(const Spectrum& s,
                                                          double temperature);

} // namespace qoe
