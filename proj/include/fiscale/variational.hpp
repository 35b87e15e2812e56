#pragma once

#include <Eigen/Core>

#include <vector>

#include "fiscale/distribution.hpp"
#include "fiscale/quadrature.hpp"
#include "fiscale/test_function.hpp"

namespace fiscale {

// Maximized generalized Rayleigh quotient value = b' M^+ b together with the
// solve diagnostics. divergence_flag marks discarded null directions of M
// that still carry a nonzero component of b: a quotient that is +infinity
// rather than 0/0.
struct VariationalEstimate {
  double value = 0.0;
  Eigen::VectorXd b;
  Eigen::VectorXd m_eigenvalues;  // ascending
  Eigen::VectorXd coefficients;   // maximizing direction a = M^+ b
  int rank_used = 0;
  double condition = 0.0;  // largest retained / smallest retained eigenvalue
  bool divergence_flag = false;
  int m = 0;
  BasisKind kind = BasisKind::linear;
  enum class Source { quadrature, empirical };
  Source source = Source::quadrature;
};

struct Moments {
  Eigen::VectorXd b;   // b_i = int x phi_i' dF
  Eigen::VectorXd mu;  // mu_i = int phi_i dF
  Eigen::MatrixXd M;   // M_ij = int phi_i phi_j dF - mu_i mu_j
};

Moments moments(const Basis& basis, const Distribution& d, const QuadratureConfig& cfg = {});

// solve value = b' M^+ b with eigenvalue cutoff reg_tol * lambda_max
VariationalEstimate solve_rayleigh(const Eigen::VectorXd& b, const Eigen::MatrixXd& M,
                                   double reg_tol);

VariationalEstimate fisher_variational(const Distribution& d, const Basis& basis,
                                       double reg_tol = 1e-12, const QuadratureConfig& cfg = {});

// plug-in with empirical moments; requires sample size n >= 2m
VariationalEstimate fisher_empirical(const Eigen::VectorXd& sample, const Basis& basis,
                                     double reg_tol = 1e-12);

enum class ScanVerdict { finite, divergent, inconclusive };

struct ScanResult {
  std::vector<int> sizes;
  std::vector<VariationalEstimate> estimates;  // over cumulative nested spans
  ScanVerdict verdict = ScanVerdict::inconclusive;
  double limit = 0.0;  // meaningful when verdict == finite
};

// Estimates over the nested spans B_1 c B_2 c ... where B_k is the union of
// build_basis(kind, sizes[j], d) for j <= k; values are nondecreasing by
// construction. Verdict rules: "finite" when the last two values differ by
// less than 0.5% relatively; "divergent" when any divergence_flag is set,
// values more than double across the last step, or the scan keeps growing
// without settling past a cumulative factor of 4.
ScanResult convergence_scan(const Distribution& d, BasisKind kind, const std::vector<int>& sizes,
                            double reg_tol = 1e-12, const QuadratureConfig& cfg = {});

std::string to_string(ScanVerdict v);

}  // namespace fiscale
