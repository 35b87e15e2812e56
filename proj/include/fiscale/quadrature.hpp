#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "fiscale/distribution.hpp"
#include "fiscale/errors.hpp"

namespace fiscale {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  double tail_prob = 1e-12;  // truncation mass per tail
  int max_subdivisions = 4000;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || !(tail_prob > 0.0))
      throw ValidationError("QuadratureConfig: tolerances must be strictly positive");
    if (!(tail_prob < 1e-6)) throw ValidationError("QuadratureConfig: tail_prob must be < 1e-6");
    if (max_subdivisions < 1) throw ValidationError("QuadratureConfig: max_subdivisions must be >= 1");
  }
};

namespace detail {

// 15-point Kronrod extension of 7-point Gauss, abscissae >= 0
inline constexpr double kGkNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kGkWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, err;
};

template <class G>
Panel eval_panel(G& g, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = g(c);
  double resk = kGkWeights[7] * fc;
  double resg = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kGkNodes[i];
    const double fsum = g(c - dx) + g(c + dx);
    resk += kGkWeights[i] * fsum;
    if (i % 2 == 1) resg += kGaussWeights[i / 2] * fsum;
  }
  return {a, b, resk * h, std::abs(resk - resg) * h};
}

inline double panel_sum(const std::vector<Panel>& panels) {
  double s = 0.0;
  for (const auto& p : panels) s += p.value;
  return s;
}

inline double panel_err(const std::vector<Panel>& panels) {
  double s = 0.0;
  for (const auto& p : panels) s += p.err;
  return s;
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod integration of g over [a,b]. Panels are
// kept in position order and refined worst-error-first with deterministic
// tie-breaking, so the summation order is independent of refinement history.
// Throws QuadratureError carrying the best estimate and achieved bound when
// the subdivision budget is exhausted.
template <class G>
double integrate(G&& g, double a, double b, const QuadratureConfig& cfg = {},
                 std::span<const double> breakpoints = {}) {
  cfg.validate();
  if (!(a < b)) return 0.0;

  std::vector<double> cuts{a};
  {
    std::vector<double> inner(breakpoints.begin(), breakpoints.end());
    std::sort(inner.begin(), inner.end());
    // the spacing filter is relative to each point's own magnitude; a filter
    // scaled by the domain width would wipe out fine structure near 0 on the
    // huge windows heavy tails produce
    for (double x : inner) {
      const double gap_prev = 4e-16 * std::max({std::abs(x), std::abs(cuts.back()), 1e-300});
      const double gap_end = 4e-16 * std::max({std::abs(x), std::abs(b), 1e-300});
      if (x > cuts.back() + gap_prev && x < b - gap_end) cuts.push_back(x);
    }
  }
  cuts.push_back(b);

  std::vector<detail::Panel> panels;
  panels.reserve(cuts.size() - 1);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    panels.push_back(detail::eval_panel(g, cuts[i], cuts[i + 1]));

  int subdivisions = 0;
  for (;;) {
    const double total = detail::panel_sum(panels);
    const double errsum = detail::panel_err(panels);
    const double target = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
    if (errsum <= target) return total;

    // worst panel, ties resolved toward the left
    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i)
      if (panels[i].err > panels[worst].err) worst = i;

    const detail::Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    const bool splittable = mid > p.a && mid < p.b &&
                            (p.b - p.a) > 1e-15 * (std::abs(p.a) + std::abs(p.b) + 1.0);
    if (!splittable || ++subdivisions > cfg.max_subdivisions) {
      throw QuadratureError("integrate: did not converge within the subdivision budget",
                            total, errsum, false);
    }
    panels[worst] = detail::eval_panel(g, p.a, mid);
    panels.insert(panels.begin() + static_cast<std::ptrdiff_t>(worst) + 1,
                  detail::eval_panel(g, mid, p.b));
  }
}

// Integration over [core_lo, core_hi] plus geometrically growing tail blocks.
// Extension stops once a block falls below abs_tol/8; blocks that keep growing
// mark the integral divergent (QuadratureError with tail_divergent set). The
// reported error bound includes the truncation term: the caller's integrand is
// bounded on the discarded tail by tail_prob * sup|g| per side.
template <class G>
double integrate_with_tails(G&& g, double core_lo, double core_hi, const QuadratureConfig& cfg = {},
                            std::span<const double> breakpoints = {}, bool extend_left = true,
                            bool extend_right = true) {
  cfg.validate();
  QuadratureConfig block_cfg = cfg;
  block_cfg.max_subdivisions = std::max(64, cfg.max_subdivisions / 8);

  double total = integrate(g, core_lo, core_hi, cfg, breakpoints);
  const double threshold = cfg.abs_tol / 8.0;

  for (int side = 0; side < 2; ++side) {
    if (side == 0 && !extend_right) continue;
    if (side == 1 && !extend_left) continue;
    double edge = side == 0 ? core_hi : core_lo;
    double step = std::max({1.0, 0.1 * (core_hi - core_lo), 0.5 * std::abs(edge)});
    double prev_mag = std::numeric_limits<double>::infinity();
    int growing = 0;
    bool settled = false;
    for (int k = 0; k < 64; ++k) {
      const double next = side == 0 ? edge + step : edge - step;
      const double block = side == 0 ? integrate(g, edge, next, block_cfg, breakpoints)
                                     : integrate(g, next, edge, block_cfg, breakpoints);
      total += block;
      const double mag = std::abs(block);
      if (mag <= threshold) {
        settled = true;
        break;
      }
      growing = mag > prev_mag ? growing + 1 : 0;
      if (growing >= 3) {
        throw QuadratureError("integrate_with_tails: tail blocks keep growing", total, mag, true);
      }
      prev_mag = mag;
      edge = next;
      step = std::max(step, std::abs(edge));
    }
    if (!settled) {
      throw QuadratureError("integrate_with_tails: tail did not settle", total, prev_mag, true);
    }
  }
  return total;
}

namespace detail {

// A doubling ladder of panel cuts out to the window edges. Wide algebraic-tail
// windows (Cauchy quantiles reach ~1/tail_prob) otherwise leave panels whose
// Kronrod nodes never see the mass piled at the inner edge.
inline void append_geometric_ladder(std::vector<double>& bp, double lo, double hi, double pivot) {
  if (!(pivot > 0.0)) pivot = 1.0;
  const double reach = std::max(std::abs(lo), std::abs(hi));
  for (double x = pivot; x < reach; x *= 2.0) {
    if (x > lo && x < hi) bp.push_back(x);
    if (-x > lo && -x < hi) bp.push_back(-x);
  }
}

inline std::vector<double> component_breakpoints(const Component& c, double lo, double hi,
                                                 std::span<const double> extra) {
  std::vector<double> bp(extra.begin(), extra.end());
  for (double p : {0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99}) bp.push_back(component_quantile(c, p));
  bp.push_back(0.0);
  const double pivot =
      std::max(component_quantile(c, 0.75) - component_quantile(c, 0.25), 1e-3 * c.sigma);
  append_geometric_ladder(bp, lo, hi, pivot);
  return bp;
}

template <class G>
double component_expect(const Component& c, G& g, const QuadratureConfig& cfg,
                        std::span<const double> extra_bp) {
  auto integrand = [&](double x) { return g(x) * component_density(c, x); };
  if (c.family == Family::uniform) {
    // exact support, nothing beyond the edges
    const double lo = c.sigma * c.lo;
    const double hi = c.sigma * c.hi;
    return integrate(integrand, lo, hi, cfg, component_breakpoints(c, lo, hi, extra_bp));
  }
  const double lo = component_quantile(c, cfg.tail_prob);
  const double hi = component_quantile(c, 1.0 - cfg.tail_prob);
  return integrate_with_tails(integrand, lo, hi, cfg, component_breakpoints(c, lo, hi, extra_bp),
                              true, true);
}

}  // namespace detail

// int g dF = sum_atoms w * g(pos) + int g f dLebesgue, componentwise over the
// quantile-truncated windows with tail extension.
template <class G>
double expect(const Distribution& d, G&& g, const QuadratureConfig& cfg = {},
              std::span<const double> extra_breakpoints = {}) {
  cfg.validate();
  double total = 0.0;
  for (const auto& at : d.atoms()) total += at.weight * g(at.position);
  for (const auto& c : d.components())
    total += c.weight * detail::component_expect(c, g, cfg, extra_breakpoints);
  return total;
}

// int g dF0: as expect, with the atom at 0 removed.
template <class G>
double expect_punctuated(const Distribution& d, G&& g, const QuadratureConfig& cfg = {},
                         std::span<const double> extra_breakpoints = {}) {
  cfg.validate();
  double total = 0.0;
  for (const auto& at : d.atoms())
    if (at.position != 0.0) total += at.weight * g(at.position);
  for (const auto& c : d.components())
    total += c.weight * detail::component_expect(c, g, cfg, extra_breakpoints);
  return total;
}

}  // namespace fiscale
