#include "fiscale/variational.hpp"

#include "fiscale/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace fiscale {

namespace {

std::vector<double> joint_breakpoints(const TestFunction& f, const TestFunction& g) {
  auto bp = f.breakpoints();
  const auto other = g.breakpoints();
  bp.insert(bp.end(), other.begin(), other.end());
  return bp;
}

}  // namespace

Moments moments(const Basis& basis, const Distribution& d, const QuadratureConfig& cfg) {
  const int m = basis.size();
  Moments mom;
  mom.b.resize(m);
  mom.mu.resize(m);
  mom.M.resize(m, m);

  for (int i = 0; i < m; ++i) {
    const auto& fi = basis.elements[static_cast<std::size_t>(i)];
    const auto bp = fi.breakpoints();
    mom.b[i] = expect(d, [&](double x) { return fi.x_dphi(x); }, cfg, bp);
    mom.mu[i] = expect(d, [&](double x) { return fi.phi(x); }, cfg, bp);
  }
  for (int i = 0; i < m; ++i) {
    const auto& fi = basis.elements[static_cast<std::size_t>(i)];
    for (int j = i; j < m; ++j) {
      const auto& fj = basis.elements[static_cast<std::size_t>(j)];
      const auto bp = joint_breakpoints(fi, fj);
      const double second = expect(d, [&](double x) { return fi.phi(x) * fj.phi(x); }, cfg, bp);
      mom.M(i, j) = mom.M(j, i) = second - mom.mu[i] * mom.mu[j];
    }
  }
  return mom;
}

VariationalEstimate solve_rayleigh(const Eigen::VectorXd& b, const Eigen::MatrixXd& M,
                                   double reg_tol) {
  if (!(reg_tol > 0.0)) throw ValidationError("solve_rayleigh: reg_tol must be positive");
  const int m = static_cast<int>(b.size());
  if (M.rows() != m || M.cols() != m) throw ValidationError("solve_rayleigh: dimension mismatch");

  VariationalEstimate est;
  est.b = b;
  est.m = m;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success) throw NumericalError("solve_rayleigh: eigendecomposition failed");
  est.m_eigenvalues = es.eigenvalues();

  const double lambda_max = std::max(est.m_eigenvalues.maxCoeff(), 0.0);
  const double cutoff = reg_tol * lambda_max;
  const double b_norm = b.norm();
  const double divergence_tol = 1e-6 * std::max(b_norm, 1e-12);

  est.coefficients = Eigen::VectorXd::Zero(m);
  double smallest_kept = 0.0;
  for (int k = 0; k < m; ++k) {
    const double lam = est.m_eigenvalues[k];
    const double proj = es.eigenvectors().col(k).dot(b);
    if (lam > cutoff && lam > 0.0) {
      est.value += proj * proj / lam;
      est.coefficients += es.eigenvectors().col(k) * (proj / lam);
      ++est.rank_used;
      smallest_kept = smallest_kept == 0.0 ? lam : std::min(smallest_kept, lam);
    } else if (std::abs(proj) > divergence_tol) {
      est.divergence_flag = true;
    }
  }
  est.condition = est.rank_used > 0 ? lambda_max / smallest_kept : 0.0;
  return est;
}

VariationalEstimate fisher_variational(const Distribution& d, const Basis& basis, double reg_tol,
                                       const QuadratureConfig& cfg) {
  const Moments mom = moments(basis, d, cfg);
  VariationalEstimate est = solve_rayleigh(mom.b, mom.M, reg_tol);
  est.kind = basis.kind;
  return est;
}

VariationalEstimate fisher_empirical(const Eigen::VectorXd& sample, const Basis& basis,
                                     double reg_tol) {
  const int m = basis.size();
  const auto n = sample.size();
  if (n < 2 * m) throw ValidationError("basis too rich for sample");

  Eigen::MatrixXd phi(n, m);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) {
    const auto& fi = basis.elements[static_cast<std::size_t>(i)];
    double bsum = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      phi(k, i) = fi.phi(sample[k]);
      bsum += fi.x_dphi(sample[k]);
    }
    b[i] = bsum / static_cast<double>(n);
  }
  const Eigen::VectorXd mu = phi.colwise().mean();
  const Eigen::MatrixXd M =
      phi.transpose() * phi / static_cast<double>(n) - mu * mu.transpose();

  VariationalEstimate est = solve_rayleigh(b, M, reg_tol);
  est.kind = basis.kind;
  est.source = VariationalEstimate::Source::empirical;
  return est;
}

namespace {

bool same_bump(const Bump& a, const Bump& b) {
  return a.kind == b.kind && a.center == b.center && a.half_width == b.half_width &&
         a.coeff == b.coeff && (a.kind == BumpKind::linear || a.branch == b.branch);
}

bool same_element(const TestFunction& f, const TestFunction& g) {
  if (f.bumps().size() != g.bumps().size()) return false;
  for (std::size_t i = 0; i < f.bumps().size(); ++i)
    if (!same_bump(f.bumps()[i], g.bumps()[i])) return false;
  return true;
}

}  // namespace

ScanResult convergence_scan(const Distribution& d, BasisKind kind, const std::vector<int>& sizes,
                            double reg_tol, const QuadratureConfig& cfg) {
  if (sizes.empty()) throw ValidationError("convergence_scan: sizes must be nonempty");
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1])
      throw ValidationError("convergence_scan: sizes must be strictly increasing");

  // bump placement needs a continuous window; for a pure-atom distribution
  // place bumps on a uniform window straddling the atoms
  Distribution placement = d;
  if (d.pure_atom()) {
    double lo = d.atoms().front().position, hi = lo;
    for (const auto& at : d.atoms()) {
      lo = std::min(lo, at.position);
      hi = std::max(hi, at.position);
    }
    placement = Distribution::uniform(lo - 1.0, hi + 1.0);
  }

  // cumulative union of the per-size bases; stages are nested spans
  Basis span;
  span.kind = kind;
  std::vector<int> stage_ends;
  for (int m : sizes) {
    const Basis layer = build_basis(kind, m, placement);
    for (const auto& el : layer.elements) {
      const bool dup = std::any_of(span.elements.begin(), span.elements.end(),
                                   [&](const TestFunction& f) { return same_element(f, el); });
      if (!dup) span.elements.push_back(el);
    }
    stage_ends.push_back(span.size());
  }

  const Moments mom = moments(span, d, cfg);

  ScanResult result;
  result.sizes = sizes;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    const int k = stage_ends[s];
    VariationalEstimate est =
        solve_rayleigh(mom.b.head(k), mom.M.topLeftCorner(k, k), reg_tol);
    est.kind = kind;
    result.estimates.push_back(std::move(est));
  }

  const auto& ests = result.estimates;
  const double v_last = ests.back().value;
  const bool any_flag = std::any_of(ests.begin(), ests.end(),
                                    [](const VariationalEstimate& e) { return e.divergence_flag; });
  if (ests.size() < 2) {
    result.verdict = any_flag ? ScanVerdict::divergent : ScanVerdict::inconclusive;
    result.limit = v_last;
    return result;
  }

  const double v_prev = ests[ests.size() - 2].value;
  const double v_first = ests.front().value;
  const double rel_step = std::abs(v_last - v_prev) / std::max(std::abs(v_last), 1e-300);
  const bool settled = rel_step < 5e-3;

  if (any_flag) {
    result.verdict = ScanVerdict::divergent;
  } else if (settled) {
    result.verdict = ScanVerdict::finite;
    result.limit = v_last;
  } else if (v_last > 2.0 * v_prev || v_last > 4.0 * std::max(v_first, 1e-300)) {
    result.verdict = ScanVerdict::divergent;
  } else {
    result.verdict = ScanVerdict::inconclusive;
  }
  return result;
}

std::string to_string(ScanVerdict v) {
  switch (v) {
    case ScanVerdict::finite: return "finite";
    case ScanVerdict::divergent: return "divergent";
    case ScanVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

}  // namespace fiscale
