#pragma once

#include <Eigen/Dense>

#include "qoe/spectral.hpp"

namespace qoe {

// Nonnegative, sums to 1 within 1e-9. Construction clamps tiny negative
// values (>= -1e-12) to zero and rejects anything more negative.
struct ProbabilityDistribution {
  Eigen::VectorXd p;
};

ProbabilityDistribution make_distribution(Eigen::VectorXd p);

// Hermitian trace-1 operator in the position basis.
struct DensityMatrix {
  Eigen::MatrixXcd rho;
};

// Validates hermiticity (1e-10 element-wise) and unit trace (1e-9).
// Positive semidefiniteness is enforced where eigenvalues get computed.
DensityMatrix make_density(Eigen::MatrixXcd rho);
DensityMatrix pure_density(const PureState& psi);

// Shannon missing information in bits, with 0*log2(0) = 0.
double smi(const ProbabilityDistribution& dist);

ProbabilityDistribution position_probabilities(const PureState& psi);
ProbabilityDistribution energy_probabilities(const PureState& psi,
                                             const Spectrum& s);

// Position-basis operator entropy: SMI of the Born probabilities (pure) or
// of diag(rho) (mixed).
double s_x(const PureState& psi);
double s_x(const DensityMatrix& rho);

// Energy-basis operator entropy; constant under unitary evolution.
double s_e(const PureState& psi, const Spectrum& s);

// von Neumann entropy in bits: SMI of the eigenvalues of rho. Eigenvalues
// down to -1e-10 are clamped; below that the matrix is rejected as not
// positive semidefinite.
double s_vn(const DensityMatrix& rho);

// Rank-1 shortcut: a pure projector has one nonzero eigenvalue, |psi|^2, so
// the series loop never materializes the N x N matrix. Exactly 0 only when
// the norm is exactly 1, which keeps norm drift visible.
double s_vn_pure(const PureState& psi);

// SMI of the populations of rho in an arbitrary orthonormal basis (columns
// of basis). s_x and s_e for mixed states are the position / energy
// specializations.
double operator_entropy(const DensityMatrix& rho, const Eigen::MatrixXd& basis);

} // namespace qoe
