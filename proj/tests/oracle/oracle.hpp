#pragma once

// Brute-force reference implementations for cross-checking the main engine
// on small systems. Everything here is deliberately naive and shares types
// only (no numerical kernels) with the library under test.

#include <Eigen/Dense>

#include <string>

#include "qoe/network.hpp"
#include "qoe/spectral.hpp"

namespace qoe::oracle {

struct OracleReport {
  std::string case_id;
  double max_abs_difference = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

inline OracleReport make_report(std::string case_id, double diff,
                                double tolerance) {
  return {std::move(case_id), diff, tolerance, diff <= tolerance};
}

// exp(-i H t_phys) psi0 via scaling-and-squaring plus a Taylor series on the
// full matrix. Intended for n <= 64.
PureState expm_propagate(const Hamiltonian& h, const PureState& psi0,
                         double t_phys);

struct TwoLevelPoint {
  double p0 = 0.0;
  double p1 = 0.0;
  double s_x = 0.0;
};

// Closed form for H = [[0,-1],[-1,0]], psi0 = (1,0):
// p0 = cos^2(t_phys), p1 = sin^2(t_phys).
TwoLevelPoint two_level_analytic(double t_phys);

// Literal double-loop evaluation of -sum |<phi_k|psi>|^2 log2(...) over the
// columns of a real orthonormal basis.
double brute_force_entropy(const PureState& psi, const Eigen::MatrixXd& basis);

} // namespace qoe::oracle
