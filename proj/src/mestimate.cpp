#include "fiscale/mestimate.hpp"

#include "fiscale/score.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace fiscale {

namespace {

bool probe_monotone(const std::function<double(double)>& dphi, const Distribution& d) {
  // x phi'(x) >= 0 over the bulk of the support
  for (int i = 1; i < 512; ++i) {
    const double p = static_cast<double>(i) / 512.0;
    const double x = quantile_continuous(d, p);
    if (x * dphi(x) < -1e-12) return false;
  }
  return true;
}

}  // namespace

ScaleScore calibrate(std::function<double(double)> phi_raw, std::function<double(double)> dphi_raw,
                     const Distribution& d, const QuadratureConfig& cfg, std::string id) {
  const double beta = expect(d, phi_raw, cfg);
  ScaleScore score;
  score.phi = [phi_raw = std::move(phi_raw), beta](double x) { return phi_raw(x) - beta; };
  score.dphi = std::move(dphi_raw);
  score.id = std::move(id);
  score.monotone = probe_monotone(score.dphi, d);
  return score;
}

ScaleScore chi2_score() {
  ScaleScore s;
  s.phi = [](double x) { return x * x - 1.0; };
  s.dphi = [](double x) { return 2.0 * x; };
  s.id = "chi2";
  s.monotone = true;
  return s;
}

ScaleScore huber_score(double k, const Distribution& ref, const QuadratureConfig& cfg) {
  if (!(k > 0.0)) throw ValidationError("huber_score: k must be positive");
  auto raw = [k](double x) { return std::min(x * x, k * k); };
  auto draw = [k](double x) { return std::abs(x) < k ? 2.0 * x : 0.0; };
  const double beta = expect(ref, raw, cfg, std::vector<double>{-k, k});
  ScaleScore s;
  s.phi = [raw, beta](double x) { return raw(x) - beta; };
  s.dphi = draw;
  s.id = "huber(" + std::to_string(k) + ")";
  s.monotone = true;
  return s;
}

ScaleScore lambda_score(const Distribution& d) {
  if (!score_defined(d)) throw InfiniteInformationError("score undefined (information infinite)");
  ScaleScore s;
  s.phi = [d](double x) { return lambda(d, x); };
  s.dphi = [d](double x) { return lambda_prime(d, x); };
  s.id = "lambda";
  s.monotone = true;
  return s;
}

ScaleScore bump_score(const TestFunction& tf, const Distribution& ref, const QuadratureConfig& cfg,
                      std::string id) {
  const auto bp = tf.breakpoints();
  const double beta = expect(ref, [&](double x) { return tf.phi(x); }, cfg, bp);
  ScaleScore s;
  s.phi = [tf, beta](double x) { return tf.phi(x) - beta; };
  s.dphi = [tf](double x) { return tf.dphi(x); };
  s.id = std::move(id);
  s.monotone = probe_monotone(s.dphi, ref);
  return s;
}

namespace {

double score_sum(const Eigen::VectorXd& xs, const ScaleScore& score, double s) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < xs.size(); ++i) acc += score.phi(xs[i] / s);
  return acc;
}

// Safeguarded bisection/secant hybrid on a bracketing interval. Bisection on
// even iterations guarantees the interval shrinks; the secant step is only
// taken when it lands safely inside.
double polish_root(const Eigen::VectorXd& xs, const ScaleScore& score, double lo, double hi,
                   double h_lo, double h_hi, double tol) {
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 300; ++iter) {
    mid = 0.5 * (lo + hi);
    if (iter % 2 == 1 && h_lo != h_hi) {
      const double secant = lo - h_lo * (hi - lo) / (h_hi - h_lo);
      const double margin = 1e-3 * (hi - lo);
      if (secant > lo + margin && secant < hi - margin) mid = secant;
    }
    const double h_mid = score_sum(xs, score, mid);
    if (std::abs(h_mid) <= tol || (hi - lo) <= 8.0 * std::numeric_limits<double>::epsilon() * hi)
      return mid;
    if ((h_mid < 0.0) == (h_hi < 0.0)) {
      hi = mid;
      h_hi = h_mid;
    } else {
      lo = mid;
      h_lo = h_mid;
    }
  }
  return mid;
}

}  // namespace

MEstimate m_estimate(const Eigen::VectorXd& sample, const ScaleScore& score) {
  if (sample.size() < 1) throw ValidationError("m_estimate: empty sample");

  double min_nonzero = 0.0, max_abs = 0.0, sumsq = 0.0;
  for (Eigen::Index i = 0; i < sample.size(); ++i) {
    const double a = std::abs(sample[i]);
    sumsq += a * a;
    if (a > 0.0) {
      min_nonzero = min_nonzero == 0.0 ? a : std::min(min_nonzero, a);
      max_abs = std::max(max_abs, a);
    }
  }
  if (max_abs == 0.0) throw ValidationError("scale unidentified");

  const double n = static_cast<double>(sample.size());
  const double tol = n * 1e-12;
  const double rms = std::sqrt(sumsq / n);

  double lo = min_nonzero / 1e6;
  double hi = max_abs * 1e6;
  double h_lo = score_sum(sample, score, lo);
  double h_hi = score_sum(sample, score, hi);

  if (score.monotone) {
    for (int round = 0; round < 8 && (h_lo < 0.0) == (h_hi < 0.0); ++round) {
      lo /= 64.0;
      hi *= 64.0;
      h_lo = score_sum(sample, score, lo);
      h_hi = score_sum(sample, score, hi);
    }
    if ((h_lo < 0.0) == (h_hi < 0.0))
      throw NumericalError("no root: score sum keeps one sign over the bracket");
    return {polish_root(sample, score, lo, hi, h_lo, h_hi, tol), 1};
  }

  // non-monotone: scan a geometric grid for every sign change (roots may hide
  // between same-signed endpoints), keep the root closest to the RMS as the
  // canonical choice, report the multiplicity
  constexpr int kCells = 512;
  const double ratio = std::pow(hi / lo, 1.0 / kCells);
  std::vector<double> roots;
  double left = lo, h_left = h_lo;
  for (int c = 1; c <= kCells; ++c) {
    const double right = c == kCells ? hi : lo * std::pow(ratio, c);
    const double h_right = c == kCells ? h_hi : score_sum(sample, score, right);
    if ((h_left < 0.0) != (h_right < 0.0) || h_left == 0.0)
      roots.push_back(polish_root(sample, score, left, right, h_left, h_right, tol));
    left = right;
    h_left = h_right;
  }
  if (roots.empty()) throw NumericalError("no root: score sum keeps one sign over the bracket");
  const auto best = std::min_element(roots.begin(), roots.end(), [&](double a, double b) {
    return std::abs(a - rms) < std::abs(b - rms);
  });
  return {*best, static_cast<int>(roots.size())};
}

AsymVariance asym_variance(const ScaleScore& score, const Distribution& d,
                           const QuadratureConfig& cfg) {
  double num = 0.0;
  try {
    num = expect(d, [&](double x) {
      const double p = score.phi(x);
      return p * p;
    }, cfg);
  } catch (const QuadratureError& e) {
    if (e.tail_divergent || std::abs(e.best_estimate) > 1e9) return {ExtReal::infinity(), false};
    throw;
  }
  const double den = expect(d, [&](double x) { return x * score.dphi(x); }, cfg);
  const double den_floor = 1e-9 * std::max(1.0, std::sqrt(std::abs(num)));
  if (std::abs(den) <= den_floor) {
    if (num <= 1e-12) return {ExtReal(0.0), true};  // 0/0: degenerate, tagged
    return {ExtReal::infinity(), false};
  }
  return {ExtReal(num / (den * den)), false};
}

double efficiency(const ScaleScore& score, const Distribution& d, const QuadratureConfig& cfg) {
  const ExtReal info = fisher_closed(d, cfg);
  if (!info.finite() || !(info.value() > 0.0))
    throw InfiniteInformationError("efficiency requires finite positive information");
  const AsymVariance v1 = asym_variance(score, d, cfg);
  if (v1.degenerate) throw ValidationError("efficiency: degenerate score for this distribution");
  if (!v1.value.finite()) return 0.0;
  return 1.0 / (info.value() * v1.value.value());
}

}  // namespace fiscale
