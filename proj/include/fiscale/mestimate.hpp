#pragma once

#include <Eigen/Core>

#include <functional>
#include <string>

#include "fiscale/distribution.hpp"
#include "fiscale/ext_real.hpp"
#include "fiscale/quadrature.hpp"
#include "fiscale/test_function.hpp"

namespace fiscale {

// A calibrated scale score: int phi dF = 0 for the reference distribution.
// monotone marks scores with x phi'(x) >= 0, for which s -> sum phi(x_i/s)
// is nonincreasing and the estimating equation has a unique root.
struct ScaleScore {
  std::function<double(double)> phi;
  std::function<double(double)> dphi;
  std::string id;
  bool monotone = true;
};

// phi_raw - int phi_raw dF; monotonicity probed on a quantile grid unless
// asserted by the caller.
ScaleScore calibrate(std::function<double(double)> phi_raw, std::function<double(double)> dphi_raw,
                     const Distribution& d, const QuadratureConfig& cfg = {},
                     std::string id = "custom");

// built-in scores
ScaleScore chi2_score();  // x^2 - 1, centered for the standard normal
ScaleScore huber_score(double k, const Distribution& ref, const QuadratureConfig& cfg = {});
ScaleScore lambda_score(const Distribution& d);  // the family score Lambda
ScaleScore bump_score(const TestFunction& tf, const Distribution& ref,
                      const QuadratureConfig& cfg = {}, std::string id = "bumps");

struct MEstimate {
  double scale = 0.0;
  int roots_found = 1;  // > 1 when a non-monotone score admitted several roots
};

// S_n > 0 solving sum phi(x_i/S_n) = 0 to |sum| <= n * 1e-12. Bracket search
// on [min|x_i != 0|/1e6, 1e6 max|x_i|] with geometric expansion, then a
// safeguarded bisection/secant hybrid. Non-monotone scores are scanned for
// all roots and the one closest to the root-mean-square is returned.
MEstimate m_estimate(const Eigen::VectorXd& sample, const ScaleScore& score);

// V1(phi, F) = int phi^2 dF / (int x phi' dF)^2. A divergent numerator is
// the tagged +infinity; numerator and denominator both ~ 0 is flagged
// degenerate instead of being forced to a value.
struct AsymVariance {
  ExtReal value;
  bool degenerate = false;
};

AsymVariance asym_variance(const ScaleScore& score, const Distribution& d,
                           const QuadratureConfig& cfg = {});

// (I * V1)^{-1} in [0,1]; 0 when V1 is infinite. Throws
// InfiniteInformationError when fisher_closed(d) is not finite and positive.
double efficiency(const ScaleScore& score, const Distribution& d,
                  const QuadratureConfig& cfg = {});

}  // namespace fiscale
