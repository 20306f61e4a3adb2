#include "qoe/states.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qoe/rng.hpp"

namespace qoe {

PureState confined_state(const SiteSet& sites, int n_init) {
  if (n_init < 1 || n_init > sites.n)
    throw std::invalid_argument("confined_state: n_init must be in [1, n]");

  // Pick the n_init sites closest to the origin, ties by index.
  std::vector<std::pair<double, int>> order(sites.n);
  for (int k = 0; k < sites.n; ++k) {
    const auto& p = sites.positions[k];
    order[k] = {p[0] * p[0] + p[1] * p[1], k};
  }
  std::partial_sort(order.begin(), order.begin() + n_init, order.end());

  PureState psi;
  psi.amplitudes = Eigen::VectorXcd::Zero(sites.n);
  const double amp = 1.0 / std::sqrt(static_cast<double>(n_init));
  for (int i = 0; i < n_init; ++i) psi.amplitudes[order[i].second] = amp;
  psi.label = "confined(" + std::to_string(n_init) + ")";
  return psi;
}

namespace {

// Marsaglia-style random superposition: i.i.d. standard-normal magnitudes
// normalized to the unit sphere, then independent uniform phases. Magnitudes
// are drawn before phases, both in index order, so a seed pins the state.
Eigen::VectorXcd random_unit_coefficients(int m, Rng& rng) {
  Eigen::VectorXd w(m);
  for (int k = 0; k < m; ++k) w[k] = rng.next_normal();
  const double norm = w.norm();
  if (norm == 0.0)
    throw std::runtime_error("random superposition: zero weight vector");
  Eigen::VectorXcd c(m);
  for (int k = 0; k < m; ++k) {
    const double phi = 2.0 * std::numbers::pi * rng.next_double();
    c[k] = std::polar(std::abs(w[k]) / norm, phi);
  }
  return c;
}

} // namespace

PureState rasee(const Spectrum& s, int n_e, std::uint64_t seed) {
  const int n = static_cast<int>(s.eigenvalues.size());
  if (n_e < 1 || n_e > n)
    throw std::invalid_argument("rasee: n_e must be in [1, N]");

  Rng rng(seed);
  const Eigen::VectorXcd c = random_unit_coefficients(n_e, rng);
  // Weighted sum of the lowest n_e eigenvectors, re-expressed in the
  // position basis. V's columns are real, so split the complex coefficients.
  const auto v = s.eigenvectors.leftCols(n_e);
  PureState psi;
  psi.amplitudes = (v * c.real()).cast<std::complex<double>>() +
                   std::complex<double>(0, 1) * (v * c.imag());
  psi.label = "rasee(n_e=" + std::to_string(n_e) + ")";
  return psi;
}

PureState random_position_superposition(int n, std::uint64_t seed) {
  if (n < 1)
    throw std::invalid_argument(
        "random_position_superposition: n must be >= 1");
  Rng rng(seed);
  PureState psi;
  psi.amplitudes = random_unit_coefficients(n, rng);
  psi.label = "position_superposition";
  return psi;
}

PureState perturbed_initial_state(const PureState& psi0,
                                  const PureState& noise, double delta) {
  if (delta < 0.0 || delta > 1.0)
    throw std::invalid_argument(
        "perturbed_initial_state: delta must be in [0, 1]");
  if (psi0.amplitudes.size() != noise.amplitudes.size())
    throw std::invalid_argument(
        "perturbed_initial_state: dimension mismatch");
  if (delta == 0.0) return psi0;

  Eigen::VectorXcd mix =
      psi0.amplitudes + std::sqrt(delta) * noise.amplitudes;
  const double norm = mix.norm();
  // The two unit vectors can in principle cancel; treat near-total
  // cancellation as degenerate input instead of renormalizing noise dust.
  if (norm < 1e-8)
    throw std::invalid_argument(
        "perturbed_initial_state: inputs cancel, resulting norm " +
        std::to_string(norm));
  char buf[64];
  std::snprintf(buf, sizeof buf, "perturbed(delta=%g)", delta);
  return {mix / norm, buf};
}

ProbabilityDistribution boltzmann_distribution(const Spectrum& s,
                                               double temperature) {
  if (!(temperature > 0.0))
    throw std::invalid_argument(
        "boltzmann_distribution: temperature must be > 0");
  // Ground-shifted weights: e^{-(E_k - E_1)/T} never overflows and the shift
  // cancels in the normalization.
  const Eigen::VectorXd shifted =
      (s.eigenvalues.array() - s.ground_energy) / s.gamma0;
  Eigen::VectorXd w = (-shifted.array() / temperature).exp();
  return make_distribution(w / w.sum());
}

std::pair<ThermalEnsemble, DensityMatrix> thermal_density(
    const Spectrum& s, double temperature) {
  ThermalEnsemble ensemble;
  ensemble.temperature = temperature;
  ensemble.occupation = boltzmann_distribution(s, temperature);
  char ref[32];
  std::snprintf(ref, sizeof ref, "%016llx",
                static_cast<unsigned long long>(spectrum_fingerprint(s)));
  ensemble.spectrum_ref = ref;

  // rho = V diag(occ) V^T, real symmetric here but stored complex to match
  // the general density-matrix type.
  const Eigen::MatrixXd rho_real = s.eigenvectors *
                                   ensemble.occupation.p.asDiagonal() *
                                   s.eigenvectors.transpose();
  DensityMatrix rho = make_density(rho_real.cast<std::complex<double>>());
  return {std::move(ensemble), std::move(rho)};
}

} // namespace qoe
