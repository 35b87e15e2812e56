#include "fiscale/score.hpp"

#include <cmath>

namespace fiscale {

bool score_defined(const Distribution& d) {
  if (d.pure_atom()) return false;
  if (d.has_off_zero_atom()) return false;
  return !d.has_family(Family::uniform);
}

double lambda(const Distribution& d, double x) {
  if (!score_defined(d))
    throw InfiniteInformationError("score undefined (information infinite)");
  if (x == 0.0) return 0.0;
  const double f = density(d, x);
  if (f <= 0.0) return 0.0;
  return -(1.0 + x * density_derivative(d, x) / f);
}

double lambda_sigma(const Distribution& d, double sigma, double x) {
  if (!(sigma > 0.0)) throw ValidationError("lambda_sigma: sigma must be positive");
  return lambda(d, x / sigma) / sigma;
}

double lambda_prime(const Distribution& d, double x) {
  if (!score_defined(d))
    throw InfiniteInformationError("score undefined (information infinite)");
  const double f = density(d, x);
  if (f <= 0.0) return 0.0;
  const double r1 = density_derivative(d, x) / f;
  const double r2 = density_second_derivative(d, x) / f;
  return -r1 - x * (r2 - r1 * r1);
}

ExtReal fisher_closed(const Distribution& d, const QuadratureConfig& cfg) {
  if (d.pure_atom()) {
    return d.has_off_zero_atom() ? ExtReal::infinity() : ExtReal(0.0);
  }
  if (d.has_off_zero_atom() || d.has_family(Family::uniform)) return ExtReal::infinity();
  const double value =
      expect_punctuated(d, [&](double x) {
        const double L = lambda(d, x);
        return L * L;
      }, cfg);
  return ExtReal(value);
}

ExtReal fisher_scale(const Distribution& d, double sigma, const QuadratureConfig& cfg) {
  if (!(sigma > 0.0)) throw ValidationError("fisher_scale: sigma must be positive");
  const ExtReal base = fisher_closed(d, cfg);
  if (!base.finite()) return base;
  return ExtReal(base.value() / (sigma * sigma));
}

}  // namespace fiscale
