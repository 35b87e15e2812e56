#pragma once

#include <Eigen/Core>

#include <vector>

#include "fiscale/distribution.hpp"

namespace fiscale {

enum class BumpKind { linear, log };
enum class BasisKind { linear, log, mixed };

// One raised-cosine bump contribution to phi'.
//   linear: phi'(x) += coeff * psi(x; center, half_width)
//   log:    phi'(x) += coeff * psi(log|x|; center, half_width) / |x|
//           on the chosen sign branch, support e^{c-w} <= |x| <= e^{c+w}
// with psi(u; c, w) = (1 + cos(pi (u-c)/w)) / 2 on |u-c| <= w, else 0.
// psi and its derivative vanish at the support edges, so phi' is continuous
// with compact support and phi (the antiderivative with phi(-inf) = 0) is
// constant outside: membership in the admissible test-function class.
struct Bump {
  BumpKind kind = BumpKind::linear;
  double center = 0.0;
  double half_width = 1.0;
  double coeff = 1.0;
  int branch = +1;  // log kind only: +1 for x > 0, -1 for x < 0

  double dphi(double x) const;
  double x_dphi(double x) const;  // x * phi'(x), evaluated without dividing by x
  double phi(double x) const;
  double support_lo() const;
  double support_hi() const;
};

class TestFunction {
 public:
  TestFunction() = default;
  explicit TestFunction(std::vector<Bump> bumps);

  double phi(double x) const;
  double dphi(double x) const;
  double x_dphi(double x) const;

  const std::vector<Bump>& bumps() const { return bumps_; }

  // support edges and bump centers, for quadrature panel placement
  std::vector<double> breakpoints() const;

  // |phi| <= sum |coeff| * half_width everywhere
  double phi_bound() const;

 private:
  std::vector<Bump> bumps_;
};

struct Basis {
  std::vector<TestFunction> elements;
  BasisKind kind = BasisKind::linear;
  int size() const { return static_cast<int>(elements.size()); }
};

// m unit bumps centered at equally spaced quantiles of d's continuous part
// (log kind: centers at log|quantile| per sign branch), half-widths 1.25x the
// local center spacing. Throws ValidationError for a pure-atom d.
Basis build_basis(BasisKind kind, int m, const Distribution& d);

// Transport the basis to the sigma-scaled model member: every element phi is
// replaced by x -> phi(x/sigma), exactly in bump parameters.
Basis transport(const Basis& basis, double sigma);

// sum_i coeffs[i] * element_i as a single TestFunction
TestFunction combine(const Basis& basis, const Eigen::VectorXd& coeffs);

}  // namespace fiscale
