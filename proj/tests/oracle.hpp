#pragma once

// Test-only reference oracle. Brute-force composite Simpson quadrature with
// hard-coded densities and score formulas. Deliberately independent of the
// library headers: nothing from include/ may be used here.

#include <cmath>
#include <functional>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

// Composite Simpson on [a,b] with n panels (n forced even).
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2 != 0) ++n;
  const double h = (b - a) / n;
  double odd = 0.0, even = 0.0;
  for (int i = 1; i < n; i += 2) odd += f(a + i * h);
  for (int i = 2; i < n; i += 2) even += f(a + i * h);
  return (f(a) + f(b) + 4.0 * odd + 2.0 * even) * h / 3.0;
}

// --- densities of the base (sigma = 1) families ---
inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }
inline double laplace_pdf(double x) { return 0.5 * std::exp(-std::abs(x)); }
inline double cauchy_pdf(double x) { return 1.0 / (kPi * (1.0 + x * x)); }
inline double exponential_pdf(double x) { return x >= 0.0 ? std::exp(-x) : 0.0; }

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// --- scale scores Lambda(x) = -(1 + x f'(x)/f(x)) ---
inline double normal_score(double x) { return x * x - 1.0; }
inline double laplace_score(double x) { return std::abs(x) - 1.0; }
inline double cauchy_score(double x) { return (x * x - 1.0) / (x * x + 1.0); }
inline double exponential_score(double x) { return x - 1.0; }

// --- int Lambda^2 dF0 by brute force ---
inline double fisher_normal() {
  return simpson([](double x) { return normal_score(x) * normal_score(x) * normal_pdf(x); },
                 -40.0, 40.0, 400000);
}

inline double fisher_laplace() {
  // split at the density kink
  auto g = [](double x) { return laplace_score(x) * laplace_score(x) * laplace_pdf(x); };
  return simpson(g, -60.0, 0.0, 200000) + simpson(g, 0.0, 60.0, 200000);
}

inline double fisher_exponential() {
  return simpson([](double x) { return exponential_score(x) * exponential_score(x) * exponential_pdf(x); },
                 0.0, 80.0, 400000);
}

inline double fisher_cauchy() {
  // substitute x = tan(t): dF = dt/pi on (-pi/2, pi/2), integrand stays bounded
  return simpson([](double t) {
    const double x = std::tan(t);
    const double s = cauchy_score(x);
    return s * s / kPi;
  }, -kPi / 2 + 1e-12, kPi / 2 - 1e-12, 100000);
}

// E_F[g] for a base family density, wide fixed window
inline double normal_expect(const std::function<double(double)>& g) {
  return simpson([&](double x) { return g(x) * normal_pdf(x); }, -40.0, 40.0, 400000);
}
inline double exponential_expect(const std::function<double(double)>& g) {
  return simpson([&](double x) { return g(x) * exponential_pdf(x); }, 0.0, 80.0, 400000);
}

// standard normal quantile by bisection on erfc (no library code)
inline double normal_quantile(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
