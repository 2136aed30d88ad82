// Licensed under the Apache License 2.0 (see LICENSE file).

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>

#include "definetti/error.hpp"
#include "definetti/special_functions.hpp"
#include "doctest.h"

using namespace definetti;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// Evaluated in long double so that rounding t / sqrt(2) does not cost
// relative accuracy far out in the tail.
double boost_tail(double t) {
  const long double x = static_cast<long double>(t) / std::sqrt(2.0L);
  return static_cast<double>(0.5L * boost::math::erfc(x));
}

}  // namespace

TEST_SUITE("special_functions") {
  TEST_CASE("normal tail matches erfc across both regimes") {
    for (double t = -8.0; t <= 37.0; t += 0.37) {
      CHECK(rel(normal_tail(t), boost_tail(t)) < 1e-13);
    }
    CHECK(normal_tail(0.0) == doctest::Approx(0.5).epsilon(1e-16));
  }

  TEST_CASE("normal cdf is accurate in the lower tail") {
    CHECK(rel(normal_cdf(-30.0), boost_tail(30.0)) < 1e-13);
    CHECK(normal_cdf(40.0) == 1.0);
  }

  TEST_CASE("normal tail integral against quadrature") {
    boost::math::quadrature::exp_sinh<double> integrator;
    for (double y : {-3.0, -0.5, 0.0, 0.7, 2.0, 5.0, 7.9, 8.1, 12.0, 25.0}) {
      const double expected = integrator.integrate([&](double s) { return boost_tail(y + s); });
      CAPTURE(y);
      CHECK(rel(normal_tail_integral(y), expected) < 1e-12);
    }
    // omega(0) = 1 / sqrt(2 pi)
    CHECK(normal_tail_integral(0.0) == doctest::Approx(kInvSqrt2Pi).epsilon(1e-16));
  }

  TEST_CASE("log gamma and beta against boost") {
    for (double x : {1e-8, 0.1, 0.5, 1.0, 1.5, 7.25, 100.0, 1e5}) {
      CHECK(std::fabs(log_gamma(x) - boost::math::lgamma(x)) < 1e-13 * std::max(1.0, std::fabs(log_gamma(x))));
    }
    CHECK(rel(beta_fn(0.5, 0.5), kPi) < 1e-14);
    CHECK(rel(beta_fn(2.0, 3.0), boost::math::beta(2.0, 3.0)) < 1e-14);
  }

  TEST_CASE("regularized incomplete beta against boost") {
    for (double a : {0.3, 0.5, 1.0, 2.375, 7.0, 40.0}) {
      for (double b : {0.2, 0.5, 1.0, 3.0, 25.0}) {
        for (double x : {1e-10, 0.01, 0.2, 0.5, 0.77, 0.99, 1.0 - 1e-9}) {
          CAPTURE(a);
          CAPTURE(b);
          CAPTURE(x);
          const double expected = boost::math::ibeta(a, b, x);
          CHECK(std::fabs(beta_inc_regularized(x, a, b) - expected) < 1e-14 + 1e-12 * expected);
        }
      }
    }
    CHECK(beta_inc_regularized(0.0, 2.0, 3.0) == 0.0);
    CHECK(beta_inc_regularized(1.0, 2.0, 3.0) == 1.0);
    // uniform: I_x(1, 1) = x
    CHECK(beta_inc_regularized(0.3, 1.0, 1.0) == doctest::Approx(0.3).epsilon(1e-15));
  }

  TEST_CASE("unregularized incomplete beta is not normalized") {
    CHECK(rel(beta_inc(0.4, 2.0, 3.0), boost::math::beta(2.0, 3.0, 0.4)) < 1e-13);
    CHECK(rel(beta_inc(1.0, 0.5, 0.5), kPi) < 1e-13);
  }

  TEST_CASE("invalid arguments are rejected") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(normal_tail(nan), InvalidArgument);
    CHECK_THROWS_AS(log_gamma(0.0), InvalidArgument);
    CHECK_THROWS_AS(beta_inc_regularized(0.5, -1.0, 2.0), InvalidArgument);
    CHECK_THROWS_AS(beta_inc_regularized(1.5, 1.0, 2.0), InvalidArgument);
    CHECK_THROWS_AS(fluctuation_scale(-0.1), InvalidArgument);
  }

  TEST_CASE("fluctuation scale") {
    CHECK(fluctuation_scale(0.5) == 0.5);
    CHECK(fluctuation_scale(0.0) == 0.0);
    CHECK(fluctuation_scale(1.0) == 0.0);
    CHECK(fluctuation_scale(0.2) == doctest::Approx(0.4).epsilon(1e-15));
  }

  TEST_CASE("accuracy targets") {
    Accuracy a;
    CHECK(a.target(0.0) == 1e-12);
    CHECK(a.target(100.0) == doctest::Approx(1e-8));
    a.abs_tol = 0.0;
    CHECK_THROWS_AS(a.validate(), InvalidArgument);
  }
}
