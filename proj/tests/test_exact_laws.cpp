// Licensed under the Apache License 2.0 (see LICENSE file).

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <cmath>
#include <numeric>

#include "definetti/error.hpp"
#include "definetti/exact_laws.hpp"
#include "definetti/measures.hpp"
#include "doctest.h"

using namespace definetti;

namespace {

MixingMeasure grid_measure(int i) {
  switch (i) {
    case 0:
      return MixingMeasure::beta(1, 1);
    case 1:
      return MixingMeasure::beta(2, 3);
    case 2:
      return MixingMeasure::beta(0.5, 0.5);
    case 3:
      return MixingMeasure::power_spike(0.2);
    case 4:
      return MixingMeasure::power_spike(0.8);
    case 5:
      return MixingMeasure::atomic({{0.5, 1.0}});
    default:
      return MixingMeasure::composite({{0.0, 0.25}, {0.3, 0.1}}, BetaDensity{2, 2});
  }
}

}  // namespace

TEST_SUITE("exact_laws") {
  TEST_CASE("small closed-form laws") {
    const QuadratureConfig cfg;
    const ExactMeanLaw one = mean_law(MixingMeasure::beta(1, 1), 1, cfg);
    REQUIRE(one.probs.size() == 2);
    CHECK(one.probs[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(one.probs[1] == doctest::Approx(0.5).epsilon(1e-15));

    const ExactMeanLaw two = mean_law(MixingMeasure::beta(1, 1), 2, cfg);
    for (double p : two.probs) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    const ExactMeanLaw dirac = mean_law(MixingMeasure::atomic({{0.5, 1.0}}), 3, cfg);
    const double expected[] = {0.125, 0.375, 0.375, 0.125};
    for (int k = 0; k < 4; ++k) CHECK(dirac.probs[k] == doctest::Approx(expected[k]).epsilon(1e-15));
  }

  TEST_CASE("Beta-Binomial against boost") {
    const double a = 2.0;
    const double b = 3.0;
    const int n = 20;
    const ExactMeanLaw law = mean_law(MixingMeasure::beta(a, b), n, QuadratureConfig{});
    for (int k = 0; k <= n; ++k) {
      const double oracle = boost::math::binomial_coefficient<double>(n, k) *
                            boost::math::beta(a + k, b + n - k) / boost::math::beta(a, b);
      CHECK(law.probs[k] == doctest::Approx(oracle).epsilon(1e-13));
    }
  }

  TEST_CASE("binomial pmf against boost") {
    for (int n : {1, 7, 200, 5000}) {
      const boost::math::binomial_distribution<double> d(n, 0.3);
      for (int k : {0, n / 3, n / 2, n}) {
        CHECK(binomial_pmf(n, k, 0.3) == doctest::Approx(boost::math::pdf(d, k)).epsilon(1e-11));
      }
    }
    CHECK(binomial_pmf(5, 0, 0.0) == 1.0);
    CHECK(binomial_pmf(5, 5, 1.0) == 1.0);
    CHECK(binomial_pmf(5, 2, 1.0) == 0.0);
    CHECK(log_binomial_coefficient(10, 3) == doctest::Approx(std::log(120.0)).epsilon(1e-15));
  }

  TEST_CASE("normalization and total expectation for every kind") {
    const QuadratureConfig cfg;
    for (int i = 0; i < 7; ++i) {
      const MixingMeasure mu = grid_measure(i);
      for (int n : {1, 2, 3, 5, 10, 37, 100, 250, 500}) {
        CAPTURE(i);
        CAPTURE(n);
        const ExactMeanLaw law = mean_law(mu, n, cfg);
        REQUIRE(law.probs.size() == static_cast<std::size_t>(n) + 1);
        double total = 0.0;
        double mean = 0.0;
        double second = 0.0;
        for (int k = 0; k <= n; ++k) {
          CHECK(law.probs[k] >= 0.0);
          total += law.probs[k];
          mean += law.probs[k] * k / n;
          second += law.probs[k] * (static_cast<double>(k) / n) * (static_cast<double>(k) / n);
        }
        CHECK(std::fabs(total - 1.0) < 1e-10);
        CHECK(std::fabs(mean - mu.mean()) < 1e-9);
        CHECK(law.mu_mean == mu.mean());
        // E[mean^2] - E[theta^2] = E[theta (1 - theta)] / n
        CHECK(std::fabs(second - mu.second_moment() - moment_theta_one_minus_theta(mu) / n) < 1e-9);
      }
    }
  }

  TEST_CASE("closed form and quadrature routes agree cell by cell") {
    const QuadratureConfig cfg;
    const MixingMeasure mu = MixingMeasure::beta(2.5, 1.5);
    const ExactMeanLaw closed = mean_law(mu, 50, cfg);
    const ExactMeanLaw quad = mean_law(mu, 50, cfg, LawRoute::quadrature);
    for (int k = 0; k <= 50; ++k) {
      CAPTURE(k);
      CHECK(std::fabs(closed.probs[k] - quad.probs[k]) < 1e-10);
    }
    const MixingMeasure singular = MixingMeasure::beta(0.5, 0.5);
    const ExactMeanLaw c2 = mean_law(singular, 30, cfg);
    const ExactMeanLaw q2 = mean_law(singular, 30, cfg, LawRoute::quadrature);
    for (int k = 0; k <= 30; ++k) CHECK(std::fabs(c2.probs[k] - q2.probs[k]) < 1e-10);
  }

  TEST_CASE("tiny tail probabilities are clamped and flagged") {
    const ExactMeanLaw law = mean_law(MixingMeasure::power_spike(0.5), 2000, QuadratureConfig{});
    CHECK(law.clamped_tail);
    CHECK(law.probs[0] == 0.0);
    CHECK(law.probs[2000] > 0.0);
    const ExactMeanLaw small = mean_law(MixingMeasure::beta(2, 2), 10, QuadratureConfig{});
    CHECK_FALSE(small.clamped_tail);
  }

  TEST_CASE("large n stays finite") {
    const ExactMeanLaw law = mean_law(MixingMeasure::beta(2, 3), 10000, QuadratureConfig{});
    const double total = std::accumulate(law.probs.begin(), law.probs.end(), 0.0);
    CHECK(std::fabs(total - 1.0) < 1e-10);
  }

  TEST_CASE("step cdf") {
    const ExactMeanLaw law = mean_law(MixingMeasure::beta(1, 1), 2, QuadratureConfig{});
    CHECK(mean_law_cdf(law, 0.49) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(mean_law_cdf(law, 0.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(mean_law_cdf(law, 1.0) == 1.0);
    CHECK(mean_law_cdf(law, 7.0) == 1.0);
    CHECK(mean_law_cdf(law, -1e-12) == 0.0);
  }

  TEST_CASE("invalid n") {
    CHECK_THROWS_AS(mean_law(MixingMeasure::beta(1, 1), 0, QuadratureConfig{}), InvalidArgument);
  }
}
