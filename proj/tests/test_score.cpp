#include "doctest.h"

#include "fiscale/distribution.hpp"
#include "fiscale/quadrature.hpp"
#include "fiscale/score.hpp"
#include "oracle.hpp"

#include <cmath>

using namespace fiscale;

namespace {
const QuadratureConfig cfg;
}

TEST_SUITE("score") {

TEST_CASE("closed-form scores") {
  CHECK(lambda(Distribution::normal(), 1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(lambda(Distribution::normal(), 2.0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(lambda(Distribution::cauchy(), 1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(lambda(Distribution::exponential(), 3.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(lambda(Distribution::laplace(), -2.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& d : {Distribution::normal(), Distribution::laplace(), Distribution::cauchy(),
                        mix(Distribution::normal(), Distribution::dirac(0.0), 0.5)})
    CHECK(lambda(d, 0.0) == 0.0);

  CHECK_THROWS_AS(lambda(Distribution::uniform(0.0, 2.0), 1.0), InfiniteInformationError);
  CHECK_THROWS_AS(lambda(Distribution::dirac(1.0), 0.5), InfiniteInformationError);
  CHECK_THROWS_AS(lambda(mix(Distribution::normal(), Distribution::dirac(1.0), 0.5), 0.5),
                  InfiniteInformationError);
}

TEST_CASE("sigma-parametrized score") {
  CHECK(lambda_sigma(Distribution::normal(), 2.0, 2.0) == doctest::Approx(0.0).scale(1.0));
  for (double x : {-1.5, 0.3, 2.0})
    CHECK(lambda_sigma(Distribution::laplace(), 1.0, x)
          == doctest::Approx(lambda(Distribution::laplace(), x)).epsilon(1e-14));

  // Lambda_sigma equals the sigma-derivative of log f_sigma
  for (const auto& d : {Distribution::normal(), Distribution::cauchy(),
                        Distribution::exponential(),
                        mix(Distribution::normal(), Distribution::laplace(), 0.4)}) {
    for (double sigma : {0.7, 1.0, 2.5}) {
      for (double x : {0.4, 1.3, -2.2, 5.0}) {
        if (d.has_family(Family::exponential) && x < 0.0) continue;
        const double h = 1e-5;
        const double numeric = (std::log(density(scale(d, sigma + h), x)) -
                                std::log(density(scale(d, sigma - h), x))) / (2.0 * h);
        CHECK(lambda_sigma(d, sigma, x) == doctest::Approx(numeric).epsilon(1e-6).scale(1.0));
      }
    }
  }
}

TEST_CASE("fisher information, closed route") {
  CHECK(fisher_closed(Distribution::normal(), cfg).value()
        == doctest::Approx(oracle::fisher_normal()).epsilon(1e-8));
  CHECK(fisher_closed(Distribution::laplace(), cfg).value()
        == doctest::Approx(oracle::fisher_laplace()).epsilon(1e-8));
  CHECK(fisher_closed(Distribution::exponential(), cfg).value()
        == doctest::Approx(oracle::fisher_exponential()).epsilon(1e-8));
  CHECK(fisher_closed(Distribution::cauchy(), cfg).value()
        == doctest::Approx(oracle::fisher_cauchy()).epsilon(1e-6));

  CHECK(fisher_closed(Distribution::normal(), cfg).value() == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(fisher_closed(Distribution::laplace(), cfg).value() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(fisher_closed(Distribution::exponential(), cfg).value()
        == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(fisher_closed(Distribution::cauchy(), cfg).value() == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("atoms at zero scale the information") {
  for (double eps : {0.1, 0.5}) {
    const auto d = mix(Distribution::normal(), Distribution::dirac(0.0), eps);
    CHECK(fisher_closed(d, cfg).value() == doctest::Approx((1 - eps) * 2.0).epsilon(1e-8));
  }
  CHECK(fisher_closed(Distribution::dirac(0.0), cfg).value() == 0.0);
}

TEST_CASE("infinite information cases") {
  CHECK_FALSE(fisher_closed(Distribution::uniform(0.0, 2.0), cfg).finite());
  CHECK_FALSE(fisher_closed(Distribution::dirac(1.0), cfg).finite());
  CHECK_FALSE(fisher_closed(mix(Distribution::normal(), Distribution::dirac(1.0), 0.5), cfg).finite());
  CHECK_FALSE(fisher_closed(mix(Distribution::normal(), Distribution::uniform(0.0, 1.0), 0.5), cfg).finite());
}

TEST_CASE("scale equivariance and invariance") {
  CHECK(fisher_scale(Distribution::normal(), 2.0, cfg).value()
        == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(fisher_scale(Distribution::cauchy(), 0.5, cfg).value()
        == doctest::Approx(2.0).epsilon(1e-5));

  for (const auto& d : {Distribution::normal(), Distribution::laplace(),
                        Distribution::exponential()}) {
    const double base = fisher_closed(d, cfg).value();
    CHECK(fisher_scale(d, 1.0, cfg).value() == doctest::Approx(base).epsilon(1e-12));
    for (double sigma : {0.5, 1.0, 3.0}) {
      CHECK(fisher_scale(d, sigma, cfg).value() * sigma * sigma
            == doctest::Approx(base).epsilon(1e-7));
      CHECK(fisher_closed(scale(d, sigma), cfg).value() == doctest::Approx(base).epsilon(1e-7));
    }
  }

  // the sigma-parametrized representation integrates to the same number
  const double direct = expect_punctuated(scale(Distribution::normal(), 2.0), [](double x) {
    const double l = lambda_sigma(Distribution::normal(), 2.0, x);
    return l * l;
  }, cfg);
  CHECK(direct == doctest::Approx(fisher_scale(Distribution::normal(), 2.0, cfg).value())
                      .epsilon(1e-8));
}

TEST_CASE("score centering and the information identity") {
  for (const auto& d : {Distribution::normal(), Distribution::laplace(), Distribution::cauchy(),
                        Distribution::exponential(),
                        mix(Distribution::normal(), Distribution::laplace(), 0.3)}) {
    CHECK(expect_punctuated(d, [&](double x) { return lambda(d, x); }, cfg)
          == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));

    const double via_ratio = expect_punctuated(d, [&](double x) {
      const double f = density(d, x);
      if (f <= 0.0) return 0.0;
      const double g = 1.0 + x * density_derivative(d, x) / f;
      return g * g;
    }, cfg);
    CHECK(fisher_closed(d, cfg).value() == doctest::Approx(via_ratio).epsilon(1e-8));
  }
}

}  // TEST_SUITE
