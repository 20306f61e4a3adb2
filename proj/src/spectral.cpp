#include "qoe/spectral.hpp"

#include <cmath>
#include <complex>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace qoe {

namespace {

// Position-basis amplitudes from energy-basis coefficients at time t (in tau
// units). V is real, so the complex product splits into two real products,
// which is what Eigen vectorizes best.
Eigen::VectorXcd from_energy_basis(const Eigen::MatrixXd& v,
                                   const Eigen::VectorXcd& coeffs) {
  return (v * coeffs.real()).template cast<std::complex<double>>() +
         std::complex<double>(0, 1) * (v * coeffs.imag());
}

Eigen::VectorXcd to_energy_basis(const Eigen::MatrixXd& v,
                                 const Eigen::VectorXcd& amplitudes) {
  return (v.transpose() * amplitudes.real())
             .template cast<std::complex<double>>() +
         std::complex<double>(0, 1) * (v.transpose() * amplitudes.imag());
}

Eigen::VectorXcd phase_factors(const Eigen::VectorXd& eigenvalues,
                               double t_phys) {
  Eigen::VectorXcd phases(eigenvalues.size());
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k)
    phases[k] = std::polar(1.0, -eigenvalues[k] * t_phys);
  return phases;
}

void check_spectrum(const Hamiltonian& h, const Spectrum& s) {
  const Eigen::Index n = s.eigenvalues.size();
  const double ortho = (s.eigenvectors.transpose() * s.eigenvectors -
                        Eigen::MatrixXd::Identity(n, n))
                           .cwiseAbs()
                           .maxCoeff();
  if (ortho > 1e-10)
    throw std::runtime_error(
        "diagonalize: eigenvector orthonormality residual " +
        std::to_string(ortho));
  const double scale = s.eigenvalues.cwiseAbs().maxCoeff();
  const double residual =
      (h.matrix * s.eigenvectors -
       s.eigenvectors * s.eigenvalues.asDiagonal())
          .cwiseAbs()
          .maxCoeff();
  // For an all-zero spectrum the residual must vanish identically.
  if (residual > 1e-8 * scale)
    throw std::runtime_error("diagonalize: eigenpair residual " +
                             std::to_string(residual));
}

} // namespace

Spectrum diagonalize(const Hamiltonian& h) {
  if (h.matrix.rows() != h.n || h.matrix.cols() != h.n)
    throw std::invalid_argument("diagonalize: matrix shape mismatch");
  if (!h.matrix.isApprox(h.matrix.transpose(), 0))
    throw std::invalid_argument("diagonalize: matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.matrix);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error(
        "diagonalize: eigensolver failed to converge (n = " +
        std::to_string(h.n) + ")");

  Spectrum s;
  s.eigenvalues = solver.eigenvalues();
  s.eigenvectors = solver.eigenvectors();
  s.ground_energy = s.eigenvalues[0];
  s.gamma0 = h.gamma0;

  // Sign convention: first strictly nonzero component positive. Pinning the
  // sign makes cached spectra and downstream sample streams reproducible
  // regardless of solver internals.
  for (Eigen::Index k = 0; k < s.eigenvectors.cols(); ++k) {
    auto col = s.eigenvectors.col(k);
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (col[i] != 0.0) {
        if (col[i] < 0.0) col = -col;
        break;
      }
    }
  }

  check_spectrum(h, s);
  return s;
}

Eigen::VectorXd scaled_energies(const Spectrum& s) {
  Eigen::VectorXd es =
      (s.eigenvalues.array() - s.ground_energy) / s.gamma0;
  es[0] = 0.0;  // exact by definition, not merely up to roundoff
  return es;
}

PureState evolve(const PureState& psi0, const Spectrum& s, double t) {
  if (t == 0.0) return psi0;  // identity, exactly
  const double t_phys = t * tau(s.gamma0);
  const Eigen::VectorXcd coeffs = to_energy_basis(s.eigenvectors,
                                                  psi0.amplitudes);
  const Eigen::VectorXcd rotated =
      coeffs.cwiseProduct(phase_factors(s.eigenvalues, t_phys));
  return {from_energy_basis(s.eigenvectors, rotated), psi0.label};
}

PureState evolve_backward(const PureState& psi, const Spectrum& s, double t) {
  return evolve(psi, s, -t);
}

double energy_expectation(const PureState& psi, const Spectrum& s) {
  const Eigen::VectorXcd coeffs = to_energy_basis(s.eigenvectors,
                                                  psi.amplitudes);
  return coeffs.cwiseAbs2().dot(scaled_energies(s));
}

SpectralPropagator::SpectralPropagator(const PureState& psi0,
                                       const Spectrum& s)
    : spectrum_(s),
      coeffs_(to_energy_basis(s.eigenvectors, psi0.amplitudes)),
      initial_(psi0.amplitudes),
      label_(psi0.label) {}

PureState SpectralPropagator::state_at(double t) const {
  if (t == 0.0) return {initial_, label_};
  const double t_phys = t * tau(spectrum_.gamma0);
  const Eigen::VectorXcd rotated =
      coeffs_.cwiseProduct(phase_factors(spectrum_.eigenvalues, t_phys));
  return {from_energy_basis(spectrum_.eigenvectors, rotated), label_};
}

Eigen::VectorXd SpectralPropagator::energy_populations() const {
  return coeffs_.cwiseAbs2();
}

std::uint64_t spectrum_fingerprint(const Spectrum& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix_bytes = [&h](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  const Eigen::Index n = s.eigenvalues.size();
  mix_bytes(&n, sizeof n);
  mix_bytes(s.eigenvalues.data(), sizeof(double) * n);
  return h;
}

namespace {

constexpr char kCacheMagic[8] = {'q', 'o', 'e', 's', 'p', 'e', 'c', '1'};

std::string cache_path(const std::string& dir, std::uint64_t key) {
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.spec",
                static_cast<unsigned long long>(key));
  return (std::filesystem::path(dir) / name).string();
}

} // namespace

bool load_spectrum_cache(const std::string& dir, std::uint64_t key,
                         Spectrum& out) {
  std::ifstream in(cache_path(dir, key), std::ios::binary);
  if (!in) return false;

  char magic[8];
  std::uint64_t n = 0;
  double gamma0 = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&gamma0), sizeof gamma0);
  if (!in || std::memcmp(magic, kCacheMagic, sizeof magic) != 0 || n == 0 ||
      n > (1u << 20))
    return false;

  Spectrum s;
  s.eigenvalues.resize(n);
  s.eigenvectors.resize(n, n);
  s.gamma0 = gamma0;
  in.read(reinterpret_cast<char*>(s.eigenvalues.data()),
          sizeof(double) * n);
  in.read(reinterpret_cast<char*>(s.eigenvectors.data()),
          sizeof(double) * n * n);
  if (!in) return false;
  s.ground_energy = s.eigenvalues[0];
  out = std::move(s);
  return true;
}

void save_spectrum_cache(const std::string& dir, std::uint64_t key,
                         const Spectrum& s) {
  std::filesystem::create_directories(dir);
  const std::string path = cache_path(dir, key);
  // Write to a temp name then rename so a crashed run cannot leave a
  // truncated entry behind that later loads garbage.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    const std::uint64_t n = s.eigenvalues.size();
    out.write(kCacheMagic, sizeof kCacheMagic);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(&s.gamma0), sizeof s.gamma0);
    out.write(reinterpret_cast<const char*>(s.eigenvalues.data()),
              sizeof(double) * n);
    out.write(reinterpret_cast<const char*>(s.eigenvectors.data()),
              sizeof(double) * n * n);
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

} // namespace qoe
