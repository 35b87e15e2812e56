#include "fiscale/asymptotics.hpp"

#include "fiscale/rng.hpp"
#include "fiscale/score.hpp"

#include <algorithm>
#include <cmath>

namespace fiscale {

double pairwise_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

struct SummaryStats {
  double mean, variance, mean_se, var_se;
};

// mean/variance with reps-1 denominator; standard errors from pairwise sums
SummaryStats summarize(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double mean = pairwise_sum(v) / n;
  std::vector<double> d2(v.size()), d4(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double c = v[i] - mean;
    d2[i] = c * c;
    d4[i] = c * c * c * c;
  }
  const double m2 = pairwise_sum(d2) / n;
  const double m4 = pairwise_sum(d4) / n;
  const double variance = m2 * n / (n - 1.0);
  const double mean_se = std::sqrt(m2 / (n - 1.0));
  const double var_se = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
  return {mean, variance, mean_se, var_se};
}

void require_regular(const Distribution& d) {
  if (!score_defined(d)) throw InfiniteInformationError("information infinite for this distribution");
}

}  // namespace

double l2_remainder(const Distribution& d, double sigma, double t, const QuadratureConfig& cfg) {
  require_regular(d);
  if (!(sigma > 0.0)) throw ValidationError("l2_remainder: sigma must be positive");
  if (t == 0.0) throw ValidationError("l2_remainder: t must be nonzero");
  if (!(sigma + t > 0.0)) throw ValidationError("l2_remainder: sigma + t must be positive");

  const Distribution f_sig = scale(d, sigma);
  const Distribution f_sig_t = scale(d, sigma + t);

  auto integrand = [&](double x) {
    const double root_t = std::sqrt(density(f_sig_t, x));
    const double root = std::sqrt(density(f_sig, x));
    const double r = root_t - root * (1.0 + 0.5 * t * lambda_sigma(d, sigma, x));
    return r * r;
  };

  std::vector<double> bp{0.0};
  for (double p : {0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99}) {
    bp.push_back(quantile_continuous(f_sig, p));
    bp.push_back(quantile_continuous(f_sig_t, p));
  }
  const double lo = std::min(quantile_continuous(f_sig, cfg.tail_prob),
                             quantile_continuous(f_sig_t, cfg.tail_prob));
  const double hi = std::max(quantile_continuous(f_sig, 1.0 - cfg.tail_prob),
                             quantile_continuous(f_sig_t, 1.0 - cfg.tail_prob));
  const double pivot = std::max(quantile_continuous(f_sig, 0.75) - quantile_continuous(f_sig, 0.25),
                                1e-3 * sigma);
  detail::append_geometric_ladder(bp, lo, hi, pivot);
  // left extension is harmless for right-supported families: the integrand
  // vanishes with the densities and the first block already settles
  const double norm2 = integrate_with_tails(integrand, lo, hi, cfg, bp, true, true);
  return std::sqrt(std::max(norm2, 0.0)) / std::abs(t);
}

McReport lan_sample(const Distribution& d, double sigma, double h, std::int64_t n, int reps,
                    std::uint64_t seed, const QuadratureConfig& cfg) {
  require_regular(d);
  if (!(sigma > 0.0)) throw ValidationError("lan_sample: sigma must be positive");
  if (n < 1 || reps < 2) throw ValidationError("lan_sample: need n >= 1 and reps >= 2");
  const double delta = h / std::sqrt(static_cast<double>(n));
  if (!(sigma + delta > 0.0)) throw ValidationError("lan_sample: sigma + h/sqrt(n) must be positive");

  const double info_scale = fisher_scale(d, sigma, cfg).value();
  const Distribution f_sig = scale(d, sigma);
  const Distribution f_sig_t = scale(d, sigma + delta);
  const double atom = f_sig.atom0();

  std::vector<double> loglik(static_cast<std::size_t>(reps));
  std::vector<double> remainder(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    const Eigen::VectorXd xs = sample(f_sig, n, derive_seed(seed, static_cast<std::uint64_t>(r)));
    std::vector<double> terms(static_cast<std::size_t>(n));
    std::vector<double> scores(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
      const double x = xs[i];
      if (x == 0.0 && atom > 0.0) {
        terms[static_cast<std::size_t>(i)] = 0.0;  // atom mass is sigma-free
        scores[static_cast<std::size_t>(i)] = 0.0;
      } else {
        terms[static_cast<std::size_t>(i)] = std::log(density(f_sig_t, x) / density(f_sig, x));
        scores[static_cast<std::size_t>(i)] = lambda_sigma(d, sigma, x);
      }
    }
    const double L = pairwise_sum(terms);
    const double T = delta * pairwise_sum(scores) - 0.5 * h * h * info_scale;
    loglik[static_cast<std::size_t>(r)] = L;
    remainder[static_cast<std::size_t>(r)] = std::abs(L - T);
  }

  const SummaryStats stats = summarize(loglik);
  const SummaryStats rem = summarize(remainder);

  McReport rep;
  rep.experiment = "lan";
  rep.n = n;
  rep.reps = reps;
  rep.seed = seed;
  rep.mean = stats.mean;
  rep.variance = stats.variance;
  rep.mean_se = stats.mean_se;
  rep.var_se = stats.var_se;
  rep.target_mean = -0.5 * h * h * info_scale;
  rep.target_var = h * h * info_scale;
  rep.remainder_mean_abs = rem.mean;
  rep.remainder_se = rem.mean_se;
  rep.pass = std::abs(rep.mean - rep.target_mean) <= 3.0 * rep.mean_se &&
             std::abs(rep.variance - rep.target_var) <= 0.15 * rep.target_var;
  return rep;
}

McReport mc_variance(const Distribution& d, const ScaleScore& score, double sigma, std::int64_t n,
                     int reps, std::uint64_t seed, const QuadratureConfig& cfg) {
  if (!(sigma > 0.0)) throw ValidationError("mc_variance: sigma must be positive");
  if (n < 2 || reps < 2) throw ValidationError("mc_variance: need n >= 2 and reps >= 2");

  const AsymVariance v1 = asym_variance(score, d, cfg);
  if (v1.degenerate || !v1.value.finite())
    throw ValidationError("mc_variance: score has no finite asymptotic variance here");
  const double target = sigma * sigma * v1.value.value();

  const Distribution f_sig = scale(d, sigma);
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  std::vector<double> stats;
  stats.reserve(static_cast<std::size_t>(reps));
  int failures = 0;
  for (int r = 0; r < reps; ++r) {
    const Eigen::VectorXd xs = sample(f_sig, n, derive_seed(seed, static_cast<std::uint64_t>(r)));
    try {
      const MEstimate est = m_estimate(xs, score);
      stats.push_back(sqrt_n * (est.scale - sigma));
    } catch (const NumericalError&) {
      ++failures;
    } catch (const ValidationError&) {
      ++failures;
    }
  }
  if (stats.size() < 2) throw NumericalError("mc_variance: too many root-finding failures");

  const SummaryStats s = summarize(stats);
  McReport rep;
  rep.experiment = "mc_variance";
  rep.n = n;
  rep.reps = reps;
  rep.seed = seed;
  rep.mean = s.mean;
  rep.variance = s.variance;
  rep.mean_se = s.mean_se;
  rep.var_se = s.var_se;
  rep.target_mean = 0.0;
  rep.target_var = target;
  rep.failures = failures;
  rep.pass = failures <= reps / 100 &&
             std::abs(rep.variance - target) <= 0.10 * target;
  return rep;
}

std::vector<BoundRow> bound_report(const Distribution& d, const std::vector<ScaleScore>& scores,
                                   const QuadratureConfig& cfg) {
  const ExtReal info = fisher_closed(d, cfg);
  if (!info.finite() || !(info.value() > 0.0))
    throw InfiniteInformationError("bound_report requires finite positive information");
  const double inv_info = 1.0 / info.value();

  std::vector<BoundRow> rows;
  rows.reserve(scores.size());
  for (const auto& score : scores) {
    BoundRow row;
    row.score_id = score.id;
    const AsymVariance v1 = asym_variance(score, d, cfg);
    row.v1 = v1.value;
    row.v1_degenerate = v1.degenerate;
    row.inv_info = inv_info;
    if (v1.degenerate) {
      row.efficiency = 0.0;
      row.bound_ok = true;
    } else if (!v1.value.finite()) {
      row.efficiency = 0.0;
      row.bound_ok = true;
    } else {
      row.efficiency = 1.0 / (info.value() * v1.value.value());
      row.bound_ok = v1.value.value() >= inv_info - 1e-8;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace fiscale
