// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <vector>

#include "definetti/measures.hpp"
#include "definetti/quadrature.hpp"

namespace definetti {

/// Exact law of the empirical mean of n exchangeable 0-1 draws:
/// probs[k] = P[mean = k/n].
struct ExactMeanLaw {
  int n = 0;
  std::vector<double> probs;
  /// E[theta] under the mixing measure, for the total-expectation check.
  double mu_mean = 0.0;
  /// Set when some probabilities below 1e-300 were flushed to zero.
  bool clamped_tail = false;
};

enum class LawRoute {
  automatic,   // Beta-Binomial and binomial closed forms where available
  quadrature,  // integrate every continuous part numerically
};

/// P[mean = k/n] = C(n, k) int t^k (1-t)^(n-k) mu(dt), k = 0..n.
/// Throws QuadratureFailure naming the cell when a per-cell integral does
/// not converge, and InvariantViolation if the result is not a probability
/// vector with the right mean.
ExactMeanLaw mean_law(const MixingMeasure& mu, int n, const QuadratureConfig& cfg,
                      LawRoute route = LawRoute::automatic);

/// Right-continuous step CDF of the law.
double mean_law_cdf(const ExactMeanLaw& law, double x);

/// ln C(n, k)
double log_binomial_coefficient(int n, int k);

/// Binomial(n, t) probability of k successes, exact at t = 0 and t = 1.
double binomial_pmf(int n, int k, double t);

}  // namespace definetti
