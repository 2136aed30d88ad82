// Licensed under the Apache License 2.0 (see LICENSE file).

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <string>
#include <vector>

#include "definetti/error.hpp"
#include "definetti/exact_laws.hpp"
#include "definetti/measures.hpp"
#include "definetti/special_functions.hpp"
#include "definetti/wasserstein.hpp"
#include "doctest.h"

using namespace definetti;

namespace {

double boost_phi(double x) { return 0.5 * boost::math::erfc(-x / std::sqrt(2.0)); }
double boost_density(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }

double dw_exact(const MixingMeasure& mu, int n) {
  return dw_mean_vs_prior(mean_law(mu, n, QuadratureConfig{}), mu);
}

}  // namespace

TEST_SUITE("wasserstein") {
  TEST_CASE("hand-integrable distances") {
    const MixingMeasure u = MixingMeasure::beta(1, 1);
    CHECK(std::fabs(dw_exact(u, 1) - 0.25) < 1e-12);
    CHECK(std::fabs(dw_exact(u, 2) - 5.0 / 36.0) < 1e-12);
    CHECK(dk_mean_vs_prior(mean_law(u, 1, QuadratureConfig{}), u) == doctest::Approx(0.5).epsilon(1e-15));

    const MixingMeasure dirac = MixingMeasure::atomic({{0.5, 1.0}});
    const ExactMeanLaw law = mean_law(dirac, 2, QuadratureConfig{});
    CHECK(dw_mean_vs_prior(law, dirac) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(dk_mean_vs_prior(law, dirac) == doctest::Approx(0.25).epsilon(1e-15));
  }

  TEST_CASE("uniform mixing has a closed form for every n") {
    // The law is uniform on the grid; on each cell |F - x| integrates to
    // ((k+1)/(n+1) - k/n)^2 / 2 + ((k+1)/n - (k+1)/(n+1))^2 / 2.
    const MixingMeasure u = MixingMeasure::beta(1, 1);
    for (int n : {3, 10, 57}) {
      double expected = 0.0;
      for (int k = 0; k < n; ++k) {
        const double c = (k + 1.0) / (n + 1.0);
        const double a = static_cast<double>(k) / n;
        const double b = (k + 1.0) / n;
        expected += 0.5 * (c - a) * (c - a) + 0.5 * (b - c) * (b - c);
      }
      CHECK(dw_exact(u, n) == doctest::Approx(expected).epsilon(1e-13));
    }
  }

  TEST_CASE("identical step laws are at distance exactly zero") {
    const ExactMeanLaw law = mean_law(MixingMeasure::beta(2, 3), 40, QuadratureConfig{});
    const GridStepCdf target(law.probs);
    const CellDistances d = cell_distances(law.probs, target);
    CHECK(d.wasserstein == 0.0);
    CHECK(d.kolmogorov == 0.0);
  }

  TEST_CASE("step law against itself as a measure") {
    const MixingMeasure corner = MixingMeasure::atomic({{0.0, 1.0}});
    const ExactMeanLaw law = mean_law(corner, 6, QuadratureConfig{});
    CHECK(dw_mean_vs_prior(law, corner) == 0.0);
    CHECK(dk_mean_vs_prior(law, corner) == 0.0);
  }

  TEST_CASE("atoms inside a cell split it") {
    const MixingMeasure mu = MixingMeasure::atomic({{0.3, 0.4}, {0.8, 0.6}});
    const int n = 3;
    const ExactMeanLaw law = mean_law(mu, n, QuadratureConfig{});
    // Both CDFs are step functions; integrate on a fine midpoint grid that
    // resolves every breakpoint exactly.
    double expected = 0.0;
    const int m = 30000;
    for (int i = 0; i < m; ++i) {
      const double x = (i + 0.5) / m;
      expected += std::fabs(mean_law_cdf(law, x) - mu.cdf(x)) / m;
    }
    CHECK(dw_mean_vs_prior(law, mu) == doctest::Approx(expected).epsilon(1e-12));
  }

  TEST_CASE("perturbed prior: Dirac mass at one half") {
    const MixingMeasure dirac = MixingMeasure::atomic({{0.5, 1.0}});
    for (long n : {1L, 4L, 100L, 100000L}) {
      const double expected = 1.0 / std::sqrt(2.0 * kPi * static_cast<double>(n));
      CHECK(std::fabs(dw_perturbed_prior(dirac, n, QuadratureConfig{}) - expected) < 1e-12);
    }
    CHECK(dw_perturbed_prior(dirac, 4, QuadratureConfig{}) == doctest::Approx(0.199471140200716).epsilon(1e-13));
  }

  TEST_CASE("perturbed prior against multiprecision oracles") {
    // Reference values from a 30-digit evaluation of the same integral.
    CHECK(std::fabs(dw_perturbed_prior(MixingMeasure::beta(1, 1), 100, QuadratureConfig{}) -
                    0.0024757149117932980349) < 1e-10);
    CHECK(std::fabs(dw_perturbed_prior(MixingMeasure::power_spike(0.5), 100, QuadratureConfig{}) -
                    0.014269826463099563681) < 1e-10);
  }

  TEST_CASE("perturbed prior for Beta(2,2) sits in the consistency window") {
    const MixingMeasure mu = MixingMeasure::beta(2, 2);
    const long n = 100;
    const BoundConstants k = bound_constants(mu, QuadratureConfig{});
    const double gap = moment_sq_plus_comp_sq(mu) / n;
    const double d = dw_perturbed_prior(mu, n, QuadratureConfig{});
    CHECK(d >= k.c1 / n - gap);
    CHECK(d <= k.c2 / n + gap);
  }

  TEST_CASE("perturbed prior rejects boundary mass") {
    const MixingMeasure mu = MixingMeasure::atomic({{0.0, 0.5}, {0.5, 0.5}});
    CHECK_THROWS_AS(dw_perturbed_prior(mu, 10, QuadratureConfig{}), InvalidArgument);
    CHECK_THROWS_AS(dual_lower_bound_abs(mu, 10, QuadratureConfig{}), InvalidArgument);
  }

  TEST_CASE("dual lower bound with |x - 1/2|") {
    const MixingMeasure dirac = MixingMeasure::atomic({{0.5, 1.0}});
    for (long n : {1L, 9L, 400L}) {
      CHECK(dual_lower_bound_abs(dirac, n, QuadratureConfig{}) ==
            doctest::Approx(1.0 / std::sqrt(2.0 * kPi * static_cast<double>(n))).epsilon(1e-14));
    }
    const MixingMeasure spike = MixingMeasure::power_spike(0.5);
    const double lower = dual_lower_bound_abs(spike, 10000, QuadratureConfig{});
    CHECK(lower > 0.0);
    CHECK(lower <= dw_perturbed_prior(spike, 10000, QuadratureConfig{}));
    // a = 0 inner identity
    CHECK(2.0 * normal_pdf(0.0) == doctest::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-16));
  }

  TEST_CASE("dual lower bound with x(x - 1) is an identity") {
    const QuadratureConfig cfg;
    auto psi = [&](const MixingMeasure& mu, int n) { return dual_lower_bound_psi(mean_law(mu, n, cfg), mu); };
    CHECK(psi(MixingMeasure::beta(1, 1), 10) == doctest::Approx(1.0 / 60.0).epsilon(1e-13));
    CHECK(psi(MixingMeasure::atomic({{0.5, 1.0}}), 4) == doctest::Approx(1.0 / 16.0).epsilon(1e-13));
    CHECK(psi(MixingMeasure::beta(2, 3), 5) == doctest::Approx(1.0 / 25.0).epsilon(1e-13));
  }

  TEST_CASE("Chen check") {
    const ChenCheck half = chen_bound_check(0.5, 1);
    const double oracle = 2.0 * (boost_phi(1.0) + boost_density(1.0) - boost_density(0.0) - 0.5) +
                          2.0 * (boost_density(1.0) - (1.0 - boost_phi(1.0)));
    CHECK(half.lhs == doctest::Approx(oracle).epsilon(1e-13));
    CHECK(half.lhs < 1.0);
    CHECK(half.rhs == doctest::Approx(1.0).epsilon(1e-15));
    for (long n : {1L, 10L, 100L}) {
      CHECK(chen_bound_check(0.5, n).rhs == doctest::Approx(1.0 / std::sqrt(static_cast<double>(n))).epsilon(1e-15));
      for (int i = 1; i <= 9; ++i) {
        const ChenCheck c = chen_bound_check(i / 10.0, n);
        CHECK(c.passed());
        CHECK(c.lhs > 0.0);
      }
    }
    CHECK_THROWS_AS(chen_bound_check(0.0, 3), InvalidArgument);
    CHECK_THROWS_AS(chen_bound_check(0.5, 0), InvalidArgument);
  }

  TEST_CASE("report invariants hold over the grid") {
    const MixingMeasure measures[] = {MixingMeasure::beta(1, 1),        MixingMeasure::beta(2, 3),
                                      MixingMeasure::beta(0.5, 0.5),    MixingMeasure::power_spike(0.2),
                                      MixingMeasure::power_spike(0.8), MixingMeasure::atomic({{0.5, 1.0}})};
    for (const auto& mu : measures) {
      for (long n : {1L, 2L, 5L, 10L, 20L, 50L, 100L, 200L}) {
        CAPTURE(mu.to_json());
        CAPTURE(n);
        const DistanceReport r = distance_report(mu, n, QuadratureConfig{});
        CHECK(r.violations().empty());
        REQUIRE(r.dw_exact);
        REQUIRE(r.dk);
        REQUIRE(r.dw_perturbed);
        CHECK(r.lower_bound <= *r.dw_exact);
        CHECK(*r.dw_exact <= r.upper_crude);
        CHECK(*r.dw_exact <= *r.dk);
        CHECK(std::fabs(*r.dw_exact - *r.dw_perturbed) <= r.equivalence_gap_bound);
        CHECK(*r.dual_lower_psi <= *r.dw_exact);
        if (r.upper_smooth) CHECK(*r.dw_exact <= *r.upper_smooth);
        CHECK(std::fabs(*r.dual_lower_psi - r.lower_bound) < 1e-10);
      }
    }
  }

  TEST_CASE("report fields for the uniform measure at n = 1") {
    const DistanceReport r = distance_report(MixingMeasure::beta(1, 1), 1, QuadratureConfig{});
    CHECK(*r.dw_exact == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(r.lower_bound == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(r.upper_crude == doctest::Approx(0.408248290463863).epsilon(1e-14));
    CHECK(r.equivalence_gap_bound == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    REQUIRE(r.upper_smooth);
    CHECK(*r.upper_smooth == doctest::Approx(7.0 / 6.0 + kThreeOverSqrt2PiE).epsilon(1e-15));
  }

  TEST_CASE("report options skip work") {
    const DistanceReport exact_only = distance_report(MixingMeasure::beta(2, 2), 10, QuadratureConfig{}, {true, false});
    CHECK(exact_only.dw_exact);
    CHECK_FALSE(exact_only.dw_perturbed);
    const DistanceReport perturbed_only =
        distance_report(MixingMeasure::beta(2, 2), 10, QuadratureConfig{}, {false, true});
    CHECK_FALSE(perturbed_only.dw_exact);
    CHECK_FALSE(perturbed_only.dk);
    CHECK(perturbed_only.dw_perturbed);
  }

  TEST_CASE("violations are named") {
    DistanceReport r;
    r.n = 7;
    r.dw_exact = 0.5;
    r.dk = 0.25;
    r.lower_bound = 0.1;
    r.upper_crude = 0.6;
    r.equivalence_gap_bound = 1.0;
    const std::vector<std::string> v = r.violations();
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("dk") != std::string::npos);
  }

  TEST_CASE("endpoint mass scales the distance") {
    const MixingMeasure base = MixingMeasure::beta(2, 2);
    for (double q : {0.25, 0.5}) {
      const MixingMeasure mixed = MixingMeasure::composite({{0.0, q}}, BetaDensity{2, 2});
      const MixingMeasure split = MixingMeasure::composite({{0.0, q / 2}, {1.0, q / 2}}, BetaDensity{2, 2});
      for (int n : {5, 50}) {
        const double expected = (1.0 - q) * dw_exact(base, n);
        CHECK(std::fabs(dw_exact(mixed, n) - expected) < 1e-8);
        CHECK(std::fabs(dw_exact(split, n) - expected) < 1e-8);
      }
    }
  }
}
