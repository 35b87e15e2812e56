#pragma once

#include "fiscale/distribution.hpp"
#include "fiscale/ext_real.hpp"
#include "fiscale/quadrature.hpp"

namespace fiscale {

// True when the closed-form score route applies: a nonempty continuous part
// built from normal/laplace/cauchy/exponential components, atoms only at 0.
bool score_defined(const Distribution& d);

// Lambda(x) = -(1 + x f'(x)/f(x)) with f the continuous-part density;
// Lambda(0) := 0, and 0 wherever f vanishes (an F0-null set).
// Throws InfiniteInformationError when no score exists (uniform or off-zero
// dirac components, pure atoms).
double lambda(const Distribution& d, double x);

// Lambda_sigma(x) = Lambda(x/sigma)/sigma, the derivative of log f_sigma in sigma.
double lambda_sigma(const Distribution& d, double sigma, double x);

// d Lambda / dx, analytic: -(f'/f) - x (f''/f - (f'/f)^2)
double lambda_prime(const Distribution& d, double x);

// int Lambda^2 dF0. Infinite for uniform or off-zero-atom distributions;
// exactly 0 for a pure point mass at 0.
ExtReal fisher_closed(const Distribution& d, const QuadratureConfig& cfg = {});

// sigma^{-2} * fisher_closed(d)
ExtReal fisher_scale(const Distribution& d, double sigma, const QuadratureConfig& cfg = {});

}  // namespace fiscale
