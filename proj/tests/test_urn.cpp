// Licensed under the Apache License 2.0 (see LICENSE file).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "definetti/error.hpp"
#include "definetti/exact_laws.hpp"
#include "definetti/measures.hpp"
#include "definetti/urn.hpp"
#include "definetti/wasserstein.hpp"
#include "doctest.h"

using namespace definetti;

namespace {

UrnConfig urn(std::int64_t A, std::int64_t B, std::int64_t m, std::int64_t n, std::int64_t reps,
              std::uint64_t seed) {
  UrnConfig cfg;
  cfg.A = A;
  cfg.B = B;
  cfg.m = m;
  cfg.n = n;
  cfg.replications = reps;
  cfg.seed = seed;
  return cfg;
}

double tv_to_exact(const EmpiricalLaw& emp, const MixingMeasure& mu) {
  const ExactMeanLaw law = mean_law(mu, emp.n, QuadratureConfig{});
  return total_variation(emp.proportions(), law.probs);
}

}  // namespace

TEST_SUITE("urn") {
  TEST_CASE("config validation") {
    CHECK_THROWS_AS(urn(0, 1, 1, 1, 1, 0).validate(), InvalidArgument);
    CHECK_THROWS_AS(urn(1, 1, 0, 1, 1, 0).validate(), InvalidArgument);
    CHECK_THROWS_AS(urn(1, 1, 1, 0, 1, 0).validate(), InvalidArgument);
    CHECK_THROWS_AS(urn(1, 1, 1, 1, 0, 0).validate(), InvalidArgument);
    const std::int64_t big = std::numeric_limits<std::int64_t>::max() / 2;
    CHECK_THROWS_AS(urn(1, 1, big, 4, 1, 0).validate(), OverflowError);
    CHECK_THROWS_AS(simulate_urn(urn(big + 1, big + 1, 1, 1, 1, 0)), OverflowError);
    CHECK_NOTHROW(urn(2, 3, 1, 20, 10, 0).validate());
  }

  TEST_CASE("histogram bookkeeping") {
    const EmpiricalLaw emp = simulate_urn(urn(1, 1, 1, 1, 100000, 3));
    REQUIRE(emp.counts.size() == 2);
    CHECK(emp.counts[0] + emp.counts[1] == 100000);
    CHECK(std::fabs(emp.proportions()[0] - 0.5) < 0.01);
    CHECK(emp.seed == 3);
    CHECK(emp.generator == kGeneratorId);
    CHECK(emp.source.find("\"A\"") != std::string::npos);
  }

  TEST_CASE("seed determinism") {
    const EmpiricalLaw a = simulate_urn(urn(2, 3, 1, 20, 50000, 42));
    const EmpiricalLaw b = simulate_urn(urn(2, 3, 1, 20, 50000, 42));
    const EmpiricalLaw c = simulate_urn(urn(2, 3, 1, 20, 50000, 43));
    CHECK(a.counts == b.counts);
    CHECK(a.counts != c.counts);
    const MixingMeasure mu = MixingMeasure::power_spike(0.5);
    CHECK(simulate_exchangeable(mu, 7, 20000, 9).counts == simulate_exchangeable(mu, 7, 20000, 9).counts);
  }

  TEST_CASE("urn laws match the exact Beta-Binomial law") {
    CHECK(tv_to_exact(simulate_urn(urn(1, 1, 1, 2, 1000000, 11)), MixingMeasure::beta(1, 1)) <= 0.01);
    CHECK(tv_to_exact(simulate_urn(urn(2, 3, 1, 20, 1000000, 12)), MixingMeasure::beta(2, 3)) <= 0.01);
  }

  TEST_CASE("exchangeable sampling matches the exact law") {
    CHECK(tv_to_exact(simulate_exchangeable(MixingMeasure::atomic({{0.5, 1.0}}), 3, 1000000, 13),
                      MixingMeasure::atomic({{0.5, 1.0}})) <= 0.01);
    CHECK(tv_to_exact(simulate_exchangeable(MixingMeasure::beta(1, 1), 2, 1000000, 14), MixingMeasure::beta(1, 1)) <=
          0.01);
    const MixingMeasure spike = MixingMeasure::power_spike(0.5);
    CHECK(tv_to_exact(simulate_exchangeable(spike, 10, 1000000, 15), spike) <= 0.01);
  }

  TEST_CASE("urn and two-stage sampling agree") {
    for (auto [A, B, m] : {std::tuple<int, int, int>{2, 3, 1}, {1, 1, 2}}) {
      const EmpiricalLaw u = simulate_urn(urn(A, B, m, 20, 1000000, 21));
      const EmpiricalLaw e = simulate_exchangeable(
          MixingMeasure::beta(static_cast<double>(A) / m, static_cast<double>(B) / m), 20, 1000000, 22);
      CHECK(total_variation(u.proportions(), e.proportions()) <= 0.01);
    }
  }

  TEST_CASE("sequences with one white draw are equally likely") {
    const std::int64_t reps = 1000000;
    const std::vector<std::int64_t> patterns = simulate_urn_patterns(urn(2, 3, 1, 3, reps, 31));
    REQUIRE(patterns.size() == 8);
    CHECK(std::accumulate(patterns.begin(), patterns.end(), std::int64_t{0}) == reps);
    const double p[] = {static_cast<double>(patterns[1]) / reps, static_cast<double>(patterns[2]) / reps,
                        static_cast<double>(patterns[4]) / reps};
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        const double se = std::sqrt((p[i] * (1 - p[i]) + p[j] * (1 - p[j])) / reps);
        CHECK(std::fabs(p[i] - p[j]) <= 4.0 * se);
      }
    }
    // P(1,0,0) = (2/5)(3/6)(4/7)
    CHECK(std::fabs(p[0] - 4.0 / 35.0) < 0.002);
    CHECK_THROWS_AS(simulate_urn_patterns(urn(1, 1, 1, 21, 10, 0)), InvalidArgument);
  }

  TEST_CASE("mixing samples stay in the support") {
    for (double g : {0.2, 0.5, 0.8}) {
      const std::vector<double> draws = sample_mixing(MixingMeasure::power_spike(g), 200000, 5);
      CHECK(std::all_of(draws.begin(), draws.end(), [](double t) { return t > 0.5 && t < 0.75; }));
    }
    const std::vector<double> atoms = sample_mixing(MixingMeasure::atomic({{0.2, 0.5}, {0.9, 0.5}}), 1000, 6);
    CHECK(std::all_of(atoms.begin(), atoms.end(), [](double t) { return t == 0.2 || t == 0.9; }));
  }

  TEST_CASE("smooth densities need an envelope to be sampled") {
    SmoothDensity d;
    d.p = [](double u) { return 6.0 * u * (1.0 - u); };
    d.p_prime = [](double u) { return 6.0 - 12.0 * u; };
    CHECK_THROWS_AS(sample_mixing(MixingMeasure::smooth(d), 10, 1), InvalidArgument);
    d.envelope = RejectionEnvelope{2.0, 2.0, 1.0};
    const MixingMeasure mu = MixingMeasure::smooth(d);
    CHECK(tv_to_exact(simulate_exchangeable(mu, 5, 200000, 2), mu) <= 0.01);
  }

  TEST_CASE("empirical distance") {
    EmpiricalLaw half;
    half.n = 1;
    half.counts = {5, 5};
    half.replications = 10;
    CHECK(empirical_dw(half, MixingMeasure::beta(1, 1)) == doctest::Approx(0.25).epsilon(1e-15));

    EmpiricalLaw corner;
    corner.n = 4;
    corner.counts = {100, 0, 0, 0, 0};
    corner.replications = 100;
    CHECK(empirical_dw(corner, MixingMeasure::atomic({{0.0, 1.0}})) == 0.0);
  }

  TEST_CASE("empirical distance is consistent with the exact pipeline") {
    const MixingMeasure mu = MixingMeasure::beta(2, 3);
    const EmpiricalLaw emp = simulate_urn(urn(2, 3, 1, 50, 1000000, 77));
    const double exact = dw_mean_vs_prior(mean_law(mu, 50, QuadratureConfig{}), mu);
    const double se = empirical_dw_standard_error(emp, mu, 200, 78);
    CHECK(se > 0.0);
    CHECK(std::fabs(empirical_dw(emp, mu) - exact) <= 3.0 * se);
  }

  TEST_CASE("total variation") {
    const std::vector<double> p{0.5, 0.5};
    const std::vector<double> q{1.0, 0.0};
    CHECK(total_variation(p, q) == 0.5);
    CHECK(total_variation(p, p) == 0.0);
    const std::vector<double> r{1.0};
    CHECK_THROWS_AS(total_variation(p, r), InvalidArgument);
  }
}
