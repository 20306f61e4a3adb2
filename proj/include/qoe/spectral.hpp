#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <numbers>
#include <string>

#include "qoe/network.hpp"

namespace qoe {

// Time unit: the characteristic tunneling time tau = pi*hbar/gamma0 with
// hbar = 1. All experiment-facing times are multiples of tau; the propagation
// phase uses t_phys = t * tau.
inline double tau(double gamma0) { return std::numbers::pi / gamma0; }

struct Spectrum {
  // Ascending eigenvalues in units of gamma0, and the matching orthonormal
  // eigenvector columns in the position basis.
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  double ground_energy = 0.0;
  double gamma0 = 1.0;
};

struct PureState {
  Eigen::VectorXcd amplitudes;
  std::string label;
};

// Dense symmetric eigendecomposition with a deterministic sign convention
// (first nonzero component of each eigenvector positive) so persisted spectra
// are bit-stable. Verifies orthonormality to 1e-10 and the eigenpair residual
// to 1e-8 * max|E| before returning; failure of either is a numerical error,
// not a warning.
Spectrum diagonalize(const Hamiltonian& h);

// E_s[k] = (E_k - E_1)/gamma0; first entry exactly 0.
Eigen::VectorXd scaled_energies(const Spectrum& s);

// psi(t) = sum_k exp(-i E_k t_phys) <E_k|psi0> |E_k> with t in units of tau.
PureState evolve(const PureState& psi0, const Spectrum& s, double t);

// Applies exp(+iH t_phys); identical to evolve with negated t.
PureState evolve_backward(const PureState& psi, const Spectrum& s, double t);

// <E_s> = sum_k |<E_k|psi>|^2 E_s[k], in scaled units.
double energy_expectation(const PureState& psi, const Spectrum& s);

// Incremental propagation for time series: the energy-basis coefficients of
// psi0 are projected once, then each requested time reuses them. Produces
// both the position-basis state and the energy populations so per-step work
// is two dense matrix-vector products.
class SpectralPropagator {
 public:
  SpectralPropagator(const PureState& psi0, const Spectrum& s);

  // t = 0 returns the stored initial amplitudes bit-for-bit (the propagator
  // is the identity there); dyadic initial distributions keep their exact
  // entropies in recorded series instead of picking up basis round-trip dust.
  PureState state_at(double t) const;
  // |<E_k|psi>|^2; time-independent by unitarity, exposed for entropy code.
  Eigen::VectorXd energy_populations() const;

 private:
  const Spectrum& spectrum_;
  Eigen::VectorXcd coeffs_;
  Eigen::VectorXcd initial_;
  std::string label_;
};

// Hash over the eigenvalue bytes; identifies a spectrum in manifests and
// thermal ensembles without carrying the matrix around.
std::uint64_t spectrum_fingerprint(const Spectrum& s);

// Binary spectrum cache keyed by the graph content hash. Avoids re-running
// the seconds-scale diagonalization when several experiments share one
// configuration. Returns false if no usable cache entry exists.
bool load_spectrum_cache(const std::string& dir, std::uint64_t key,
                         Spectrum& out);
void save_spectrum_cache(const std::string& dir, std::uint64_t key,
                         const Spectrum& s);

} // namespace qoe
