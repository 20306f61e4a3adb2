#include "qoe/entropy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qoe {

namespace {

constexpr double kNegativeClamp = -1e-12;  // probability dust threshold
constexpr double kSumTolerance = 1e-9;

// Shared SMI kernel over a raw nonnegative vector assumed normalized.
double smi_of(const Eigen::VectorXd& p) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    const double v = p[k];
    if (v > 0.0) acc -= v * std::log2(v);
  }
  return acc;
}

} // namespace

ProbabilityDistribution make_distribution(Eigen::VectorXd p) {
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (p[k] < 0.0) {
      if (p[k] < kNegativeClamp)
        throw std::invalid_argument(
            "probability distribution: entry " + std::to_string(k) +
            " is " + std::to_string(p[k]) + ", beyond the clamp tolerance");
      p[k] = 0.0;
    }
  }
  // Accumulate in extended precision: for a uniform support of up to a few
  // thousand equal entries a, every partial sum k*a is exactly representable
  // in the 64-bit significand, so the renormalization divides by exactly k*a
  // and dyadic uniform states keep integer-bit entropies. Eigen's vectorized
  // sum() rounds intermediate partials (3a already rounds) and loses that.
  long double acc = 0.0L;
  for (Eigen::Index k = 0; k < p.size(); ++k) acc += p[k];
  const double sum = static_cast<double>(acc);
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw std::invalid_argument(
        "probability distribution: sum deviates from 1 by " +
        std::to_string(sum - 1.0));
  // Inside tolerance the distribution is renormalized so entropies see an
  // exactly unit mass.
  p /= sum;
  return {std::move(p)};
}

DensityMatrix make_density(Eigen::MatrixXcd rho) {
  if (rho.rows() != rho.cols())
    throw std::invalid_argument("density matrix: not square");
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10)
    throw std::invalid_argument(
        "density matrix: hermiticity residual " + std::to_string(herm));
  const double trace_err = std::abs(rho.trace().real() - 1.0) +
                           std::abs(rho.trace().imag());
  if (trace_err > 1e-9)
    throw std::invalid_argument("density matrix: trace deviates from 1 by " +
                                std::to_string(trace_err));
  return {std::move(rho)};
}

DensityMatrix pure_density(const PureState& psi) {
  return make_density(psi.amplitudes * psi.amplitudes.adjoint());
}

double smi(const ProbabilityDistribution& dist) { return smi_of(dist.p); }

ProbabilityDistribution position_probabilities(const PureState& psi) {
  return make_distribution(psi.amplitudes.cwiseAbs2());
}

ProbabilityDistribution energy_probabilities(const PureState& psi,
                                             const Spectrum& s) {
  // V is real: project real and imaginary parts separately, then combine.
  const Eigen::VectorXd re = s.eigenvectors.transpose() *
                             psi.amplitudes.real();
  const Eigen::VectorXd im = s.eigenvectors.transpose() *
                             psi.amplitudes.imag();
  return make_distribution(re.cwiseAbs2() + im.cwiseAbs2());
}

double s_x(const PureState& psi) { return smi(position_probabilities(psi)); }

double s_x(const DensityMatrix& rho) {
  return smi(make_distribution(rho.rho.diagonal().real()));
}

double s_e(const PureState& psi, const Spectrum& s) {
  return smi(energy_probabilities(psi, s));
}

double s_vn(const DensityMatrix& rho) {
  // Thermal and other real-symmetric density matrices take the real solver;
  // the eigenvalues are the same and it is several times faster.
  Eigen::VectorXd lambda;
  if (rho.rho.imag().isZero(0.0)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        rho.rho.real(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("s_vn: eigensolver failed to converge");
    lambda = solver.eigenvalues();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        rho.rho, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("s_vn: eigensolver failed to converge");
    lambda = solver.eigenvalues();
  }
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    if (lambda[k] < 0.0) {
      if (lambda[k] < -1e-10)
        throw std::invalid_argument(
            "s_vn: density matrix not positive semidefinite, eigenvalue " +
            std::to_string(lambda[k]));
      lambda[k] = 0.0;
    }
  }
  // Renormalize: trace dust can leave an eigenvalue a hair above 1, and
  // -v log2 v is negative there. Dividing by the sum keeps every value in
  // [0, 1], so the result is nonnegative.
  const double total = lambda.sum();
  if (total <= 0.0) return 0.0;
  lambda /= total;
  return smi_of(lambda);
}

double s_vn_pure(const PureState& psi) {
  // Rank-1 projector: eigenvalues are {|psi|^2, 0, ...}. -p log2 p with the
  // 0 log 0 = 0 convention; p = 1 gives exactly 0. The magnitude is reported
  // so that norm drift on either side of 1 shows up as positive dust.
  const double p = psi.amplitudes.squaredNorm();
  if (p <= 0.0 || p == 1.0) return 0.0;
  return std::abs(-p * std::log2(p));
}

double operator_entropy(const DensityMatrix& rho,
                        const Eigen::MatrixXd& basis) {
  const Eigen::Index n = basis.rows();
  const double ortho =
      (basis.transpose() * basis - Eigen::MatrixXd::Identity(n, n))
          .cwiseAbs()
          .maxCoeff();
  if (ortho > 1e-10)
    throw std::invalid_argument(
        "operator_entropy: basis orthonormality residual " +
        std::to_string(ortho));
  // p_k = <phi_k| rho |phi_k> = sum_ij conj(B_ik) rho_ij B_jk: one n^3
  // product then a column-wise contraction, no per-k matrix temporaries.
  const Eigen::MatrixXcd rho_b = rho.rho * basis;
  Eigen::VectorXd p(n);
  for (Eigen::Index k = 0; k < n; ++k)
    p[k] = basis.col(k).dot(rho_b.col(k).real());
  return smi(make_distribution(std::move(p)));
}

} // namespace qoe
