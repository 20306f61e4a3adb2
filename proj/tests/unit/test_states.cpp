#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "qoe/entropy.hpp"
#include "qoe/network.hpp"
#include "qoe/rng.hpp"
#include "qoe/spectral.hpp"
#include "qoe/states.hpp"

using namespace qoe;
using Cplx = std::complex<double>;

namespace {

Spectrum network_spectrum(int n, std::uint64_t seed) {
  const SiteSet sites = generate_sites(n, seed);
  const ConnectivityGraph g =
      build_connectivity(sites, 3, std::min(n - 1, 8), seed + 1);
  return diagonalize(assemble_hamiltonian(g, 0.0, 1.0));
}

SiteSet manual_sites(std::vector<std::array<double, 2>> positions) {
  SiteSet s;
  s.n = static_cast<int>(positions.size());
  s.positions = std::move(positions);
  s.seed = 0;
  return s;
}

double harmonic(int n) {
  double h = 0.0;
  for (int i = 1; i <= n; ++i) h += 1.0 / i;
  return h;
}

struct SampleStats {
  double mean = 0.0;
  double stderr_mean = 0.0;
};

SampleStats stats(const std::vector<double>& xs) {
  SampleStats out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.stderr_mean = std::sqrt(ss / (xs.size() - 1.0) /
                              static_cast<double>(xs.size()));
  return out;
}

} // namespace

TEST_CASE("confined_state: entropy is exactly log2 of the site count") {
  const SiteSet sites = generate_sites(256, 99);

  CHECK(s_x(confined_state(sites, 1)) == 0.0);
  for (int k = 2; k <= 7; ++k) {
    const PureState psi = confined_state(sites, 1 << k);
    CHECK(s_x(psi) == static_cast<double>(k));
    CHECK(psi.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(confined_state(sites, 64).label == "confined(64)");
}

TEST_CASE("confined_state picks the sites closest to the origin") {
  const SiteSet sites =
      manual_sites({{0.5, 0.0}, {0.1, 0.1}, {-0.3, 0.0}});
  const PureState one = confined_state(sites, 1);
  CHECK(std::abs(one.amplitudes[1]) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(one.amplitudes[0] == Cplx(0, 0));

  const PureState two = confined_state(sites, 2);
  CHECK(std::abs(two.amplitudes[1]) > 0.0);
  CHECK(std::abs(two.amplitudes[2]) > 0.0);
  CHECK(two.amplitudes[0] == Cplx(0, 0));
}

TEST_CASE("confined_state breaks distance ties by site index") {
  const SiteSet sites =
      manual_sites({{0.3, 0.0}, {0.0, 0.3}, {-0.3, 0.0}});
  const PureState psi = confined_state(sites, 2);
  CHECK(std::abs(psi.amplitudes[0]) > 0.0);
  CHECK(std::abs(psi.amplitudes[1]) > 0.0);
  CHECK(psi.amplitudes[2] == Cplx(0, 0));
}

TEST_CASE("confined_state rejects out-of-range counts") {
  const SiteSet sites = generate_sites(8, 5);
  CHECK_THROWS_AS(confined_state(sites, 0), std::invalid_argument);
  CHECK_THROWS_AS(confined_state(sites, 9), std::invalid_argument);
}

TEST_CASE("rasee: single eigenvector reduces to a phase on the ground state") {
  const Spectrum s = network_spectrum(32, 11);
  const PureState psi = rasee(s, 1, 77);
  const Cplx overlap =
      s.eigenvectors.col(0).cast<Cplx>().dot(psi.amplitudes);
  CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s_e(psi, s) <= 1e-10);
}

TEST_CASE("rasee: unit norm, determinism, range checks") {
  const Spectrum s = network_spectrum(48, 13);
  const PureState a = rasee(s, 24, 123);
  const PureState b = rasee(s, 24, 123);
  CHECK(a.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK((a.amplitudes - b.amplitudes).cwiseAbs().maxCoeff() == 0.0);

  const PureState c = rasee(s, 24, 124);
  CHECK((a.amplitudes - c.amplitudes).cwiseAbs().maxCoeff() > 1e-6);

  CHECK(a.label == "rasee(n_e=24)");
  CHECK_THROWS_AS(rasee(s, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(rasee(s, 49, 1), std::invalid_argument);
}

TEST_CASE("rasee stays inside the low-energy subspace") {
  const Spectrum s = network_spectrum(48, 17);
  const PureState psi = rasee(s, 12, 5);
  const Eigen::VectorXd p = energy_probabilities(psi, s).p;
  double tail = 0.0;
  for (int k = 12; k < 48; ++k) tail += p[k];
  CHECK(tail <= 1e-20);
}

// Full-basis rasee rotated into the position frame approaches the entropy of
// a uniformly random complex unit vector, whose mean is (H_N - 1)/ln 2. The
// alternative one-deviate-per-site statistics would land ~0.4 bits lower, so
// a 0.05 window cleanly discriminates the construction.
TEST_CASE("rasee position entropy matches the random-vector ensemble mean") {
  const int n = 256;
  const Spectrum s = network_spectrum(n, 4242);
  std::vector<double> samples;
  samples.reserve(300);
  for (int k = 0; k < 300; ++k)
    samples.push_back(s_x(rasee(s, n, derive_seed(9000, k))));

  const SampleStats st = stats(samples);
  const double expected = (harmonic(n) - 1.0) / std::numbers::ln2;
  CHECK(st.stderr_mean < 0.01);
  CHECK(std::abs(st.mean - expected) < 0.05);
}

TEST_CASE("random_position_superposition: basics") {
  const PureState one = random_position_superposition(1, 3);
  CHECK(std::abs(one.amplitudes[0]) == doctest::Approx(1.0).epsilon(1e-14));

  const PureState a = random_position_superposition(64, 8);
  const PureState b = random_position_superposition(64, 8);
  CHECK(a.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((a.amplitudes - b.amplitudes).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(random_position_superposition(0, 1), std::invalid_argument);
}

// Squared magnitudes of one normal deviate per site are Dirichlet(1/2)
// distributed, with mean entropy (H_{N/2} - 2 + 2 ln 2)/ln 2.
TEST_CASE("position superposition entropy matches the Dirichlet(1/2) mean") {
  const int n = 256;
  std::vector<double> samples;
  samples.reserve(300);
  for (int k = 0; k < 300; ++k)
    samples.push_back(s_x(random_position_superposition(n, derive_seed(7000, k))));

  const SampleStats st = stats(samples);
  const double expected =
      (harmonic(n / 2) - 2.0 + 2.0 * std::numbers::ln2) / std::numbers::ln2;
  CHECK(st.stderr_mean < 0.01);
  CHECK(std::abs(st.mean - expected) < 0.05);
}

TEST_CASE("perturbed_initial_state: limits and validation") {
  const SiteSet sites = generate_sites(64, 31);
  const PureState psi0 = confined_state(sites, 4);

  // delta = 0 returns the input untouched.
  const PureState same = perturbed_initial_state(psi0, psi0, 0.0);
  CHECK((same.amplitudes - psi0.amplitudes).cwiseAbs().maxCoeff() == 0.0);
  CHECK(same.label == psi0.label);

  // Orthogonal unit noise at delta = 1 splits the weight evenly.
  PureState ortho;
  ortho.amplitudes = Eigen::VectorXcd::Zero(64);
  ortho.amplitudes[63] = 1.0;  // site 63 is far from the origin, not confined
  const PureState mixed = perturbed_initial_state(psi0, ortho, 1.0);
  CHECK(mixed.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-12));
  const Cplx overlap = psi0.amplitudes.dot(mixed.amplitudes);
  CHECK(std::norm(overlap) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mixed.label == "perturbed(delta=1)");

  CHECK_THROWS_AS(perturbed_initial_state(psi0, ortho, -0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(perturbed_initial_state(psi0, ortho, 1.5),
                  std::invalid_argument);

  PureState anti = psi0;
  anti.amplitudes = -anti.amplitudes;
  CHECK_THROWS_AS(perturbed_initial_state(psi0, anti, 1.0),
                  std::invalid_argument);

  PureState short_noise;
  short_noise.amplitudes = Eigen::VectorXcd::Zero(8);
  CHECK_THROWS_AS(perturbed_initial_state(psi0, short_noise, 0.5),
                  std::invalid_argument);
}

TEST_CASE("boltzmann_distribution: two-level limits") {
  const SiteSet sites = generate_sites(2, 1);
  const ConnectivityGraph g = build_connectivity(sites, 9, 1, 2);
  const Spectrum s = diagonalize(assemble_hamiltonian(g, 0.0, 1.0));

  const Eigen::VectorXd hot = boltzmann_distribution(s, 1e12).p;
  CHECK(hot[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(hot[1] == doctest::Approx(0.5).epsilon(1e-9));

  const Eigen::VectorXd cold = boltzmann_distribution(s, 1e-6).p;
  CHECK(cold[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cold[1] < 1e-100);  // underflows to a denormal, not a clean zero

  CHECK_THROWS_AS(boltzmann_distribution(s, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(boltzmann_distribution(s, -1.0), std::invalid_argument);
}

TEST_CASE("boltzmann occupations never increase with energy") {
  const Spectrum s = network_spectrum(64, 41);
  for (double t : {0.1, 1.0, 10.0}) {
    const Eigen::VectorXd p = boltzmann_distribution(s, t).p;
    for (int k = 0; k + 1 < 64; ++k) CHECK(p[k] >= p[k + 1]);
  }
}

TEST_CASE("thermal_density agrees with its occupation spectrum") {
  const Spectrum s = network_spectrum(64, 43);
  const auto [ensemble, rho] = thermal_density(s, 2.0);

  // Same code path as the standalone distribution, so exact agreement.
  const Eigen::VectorXd direct = boltzmann_distribution(s, 2.0).p;
  CHECK((ensemble.occupation.p - direct).cwiseAbs().maxCoeff() == 0.0);

  // Eigenvalues of rho are the occupations, so the two entropies coincide.
  CHECK(std::abs(s_vn(rho) - smi(ensemble.occupation)) <= 1e-8);
  CHECK(ensemble.temperature == 2.0);
  CHECK(ensemble.spectrum_ref.size() == 16);

  // Infinite-temperature limit: rho approaches I/N.
  const auto [hot_ens, hot_rho] = thermal_density(s, 1e12);
  CHECK((hot_rho.rho - Eigen::MatrixXcd::Identity(64, 64) / 64.0)
            .cwiseAbs()
            .maxCoeff() <= 1e-9);
  (void)hot_ens;
}

TEST_CASE("flat spectrum thermalizes to the uniform distribution") {
  ConnectivityGraph g;
  g.n = 4;
  g.degree_min = 0;
  g.degree_max = 0;
  g.degree_mean = 0.0;
  const Spectrum s = diagonalize(assemble_hamiltonian(g, 2.5, 1.0));
  const Eigen::VectorXd p = boltzmann_distribution(s, 0.7).p;
  for (int k = 0; k < 4; ++k)
    CHECK(p[k] == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("two-level thermal state at high temperature is maximally mixed") {
  const SiteSet sites = generate_sites(2, 7);
  const ConnectivityGraph g = build_connectivity(sites, 9, 1, 8);
  const Spectrum s = diagonalize(assemble_hamiltonian(g, 0.0, 1.0));
  const auto [ensemble, rho] = thermal_density(s, 1e12);
  CHECK(s_vn(rho) == doctest::Approx(1.0).epsilon(1e-9));
  (void)ensemble;
}
