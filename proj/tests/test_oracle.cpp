#include "doctest.h"

#include "oracle.hpp"

#include <cmath>

// Frozen reference constants. Every closed-form value asserted elsewhere in the
// suite is pinned here against the brute-force oracle first.

TEST_SUITE("oracle") {

TEST_CASE("fisher information of scale, brute force") {
  CHECK(oracle::fisher_normal() == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(oracle::fisher_laplace() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(oracle::fisher_exponential() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(oracle::fisher_cauchy() == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("point values used as test expectations") {
  CHECK(oracle::normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
  CHECK(1.0 - std::exp(-1.0) == doctest::Approx(0.6321205588285577).epsilon(1e-14));
  CHECK(oracle::normal_expect([](double x) { return x * x; }) == doctest::Approx(1.0).epsilon(1e-11));

  // V1(x^2-1, normal) = E(x^2-1)^2 / (E 2x^2)^2 = 2/4
  const double num = oracle::normal_expect([](double x) { return (x * x - 1) * (x * x - 1); });
  const double den = oracle::normal_expect([](double x) { return 2.0 * x * x; });
  CHECK(num / (den * den) == doctest::Approx(0.5).epsilon(1e-10));

  // Huber k=1 calibration offset under the normal: E min(x^2,1) = 1 - 2 phi(1)
  const double beta = oracle::normal_expect([](double x) { return std::min(x * x, 1.0); });
  CHECK(beta == doctest::Approx(0.5160585509617133).epsilon(1e-11));

  // exponential: E(x-1)^2 = 1, E x phi'(x) = E x = 1 for phi = x - 1
  CHECK(oracle::exponential_expect([](double x) { return (x - 1) * (x - 1); })
        == doctest::Approx(1.0).epsilon(1e-10));

  // normal quantiles framing the m=8 basis window
  CHECK(oracle::normal_quantile(1.0 / 9.0) == doctest::Approx(-1.2206403488).epsilon(1e-8));
  CHECK(oracle::normal_quantile(8.0 / 9.0) == doctest::Approx(1.2206403488).epsilon(1e-8));

  // RMS closed form for the chi-squared score on [1,2,3]
  CHECK(std::sqrt(14.0 / 3.0) == doctest::Approx(2.1602468994692869).epsilon(1e-15));
}

}  // TEST_SUITE
