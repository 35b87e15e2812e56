#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fiscale/distribution.hpp"
#include "fiscale/ext_real.hpp"
#include "fiscale/mestimate.hpp"
#include "fiscale/quadrature.hpp"

namespace fiscale {

// Fixed-order pairwise summation; identical results for any worker count.
double pairwise_sum(std::span<const double> values);

// Seeded Monte Carlo summary. mean_se = sample sd / sqrt(reps); var_se is the
// delta-method standard error of the variance estimate.
struct McReport {
  std::string experiment;
  std::int64_t n = 0;
  int reps = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double variance = 0.0;
  double mean_se = 0.0;
  double var_se = 0.0;
  double target_mean = 0.0;
  double target_var = 0.0;
  bool pass = false;
  // lan: mean|L - T| and its se; mc_variance: root-finding failure count
  double remainder_mean_abs = 0.0;
  double remainder_se = 0.0;
  int failures = 0;
};

// L2-differentiability remainder at scale sigma, step t:
//   r(t) = || sqrt(f_{sigma+t}) - sqrt(f_sigma) (1 + t Lambda_sigma / 2) ||_L2(dx) / |t|
// The atom at 0 contributes exactly 0. Throws InfiniteInformationError for
// irregular families.
double l2_remainder(const Distribution& d, double sigma, double t,
                    const QuadratureConfig& cfg = {});

// Per replicate, draws x_1..x_n ~ F_sigma and compares the log-likelihood
// ratio L = sum log(f_{sigma+h/sqrt(n)}/f_sigma)(x_i) against the quadratic
// expansion T = h/sqrt(n) sum Lambda_sigma(x_i) - h^2 I_s / 2. Targets:
// mean(L) -> -h^2 I_s / 2, var(L) -> h^2 I_s.
McReport lan_sample(const Distribution& d, double sigma, double h, std::int64_t n, int reps,
                    std::uint64_t seed, const QuadratureConfig& cfg = {});

// Replicates m_estimate on samples from scale(d, sigma); the variance of
// sqrt(n) (S_n - sigma) is compared against sigma^2 V1(phi, F). More than 1%
// root-finding failures fails the run.
McReport mc_variance(const Distribution& d, const ScaleScore& score, double sigma, std::int64_t n,
                     int reps, std::uint64_t seed, const QuadratureConfig& cfg = {});

struct BoundRow {
  std::string score_id;
  ExtReal v1;
  bool v1_degenerate = false;
  double inv_info = 0.0;
  double efficiency = 0.0;
  bool bound_ok = false;  // V1 >= 1/I - 1e-8
};

// One row per score: V1, 1/I, efficiency. Requires finite information.
std::vector<BoundRow> bound_report(const Distribution& d, const std::vector<ScaleScore>& scores,
                                   const QuadratureConfig& cfg = {});

}  // namespace fiscale
