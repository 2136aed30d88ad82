// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "definetti/measures.hpp"

namespace definetti {

/// Polya-Eggenberger urn: A white and B black balls, each draw returns the
/// ball together with m more of the same colour.
struct UrnConfig {
  std::int64_t A = 1;
  std::int64_t B = 1;
  std::int64_t m = 1;
  std::int64_t n = 1;
  std::int64_t replications = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Histogram of the number of ones over Monte Carlo replications.
struct EmpiricalLaw {
  int n = 0;
  std::vector<std::int64_t> counts;  // n + 1 entries
  std::int64_t replications = 0;
  std::uint64_t seed = 0;
  std::string generator;
  /// JSON object describing what was simulated.
  std::string source;

  std::vector<double> proportions() const;
};

/// Identifier of the random stream layout, stored in simulation metadata.
extern const char* const kGeneratorId;

EmpiricalLaw simulate_urn(const UrnConfig& cfg);

/// Counts of every 0-1 pattern of length n (bit i = draw i + 1), n <= 20.
std::vector<std::int64_t> simulate_urn_patterns(const UrnConfig& cfg);

/// theta ~ mu, then Binomial(n, theta).
EmpiricalLaw simulate_exchangeable(const MixingMeasure& mu, int n, std::int64_t replications,
                                   std::uint64_t seed);

/// Draws `count` values of theta ~ mu (exposed for support checks).
std::vector<double> sample_mixing(const MixingMeasure& mu, std::int64_t count, std::uint64_t seed);

/// W1 distance between the empirical law of the mean and mu.
double empirical_dw(const EmpiricalLaw& emp, const MixingMeasure& mu);

/// Bootstrap standard error of empirical_dw (multinomial resampling).
double empirical_dw_standard_error(const EmpiricalLaw& emp, const MixingMeasure& mu, int resamples,
                                   std::uint64_t seed);

/// (1/2) sum |p - q|
double total_variation(std::span<const double> p, std::span<const double> q);

}  // namespace definetti
