// Licensed under the Apache License 2.0 (see LICENSE file).

#include "definetti/exact_laws.hpp"

#include <cmath>
#include <sstream>

#include "definetti/error.hpp"
#include "definetti/parallel.hpp"
#include "definetti/special_functions.hpp"

namespace definetti {

namespace {

constexpr double kUnderflowClamp = 1e-300;
constexpr double kNormalizationTolerance = 1e-10;
constexpr double kMeanTolerance = 1e-9;

// k ln t + (n - k) ln(1 - t), with 0 * ln 0 = 0.
double log_kernel(int n, int k, double t, double tc) {
  double v = 0.0;
  if (k > 0) v += k * std::log(t);
  if (n - k > 0) v += (n - k) * std::log(tc);
  return v;
}

double beta_binomial_pmf(int n, int k, double alpha, double beta) {
  return std::exp(log_binomial_coefficient(n, k) + log_beta_fn(alpha + k, beta + n - k) -
                  log_beta_fn(alpha, beta));
}

}  // namespace

double log_binomial_coefficient(int n, int k) {
  if (k < 0 || k > n) throw InvalidArgument("log_binomial_coefficient: k out of range");
  return log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0);
}

double binomial_pmf(int n, int k, double t) {
  if (k < 0 || k > n) return 0.0;
  if (t == 0.0) return k == 0 ? 1.0 : 0.0;
  if (t == 1.0) return k == n ? 1.0 : 0.0;
  return std::exp(log_binomial_coefficient(n, k) + log_kernel(n, k, t, 1.0 - t));
}

ExactMeanLaw mean_law(const MixingMeasure& mu, int n, const QuadratureConfig& cfg, LawRoute route) {
  if (n < 1) throw InvalidArgument("mean_law: n must be >= 1");
  cfg.validate();
  ExactMeanLaw law;
  law.n = n;
  law.mu_mean = mu.mean();
  law.probs.assign(static_cast<std::size_t>(n) + 1, 0.0);

  const ContinuousPart* part = mu.continuous();
  const auto* beta = part ? std::get_if<BetaDensity>(part) : nullptr;
  const bool closed_beta = beta && route == LawRoute::automatic;
  const double w = mu.continuous_weight();

  parallel_for(law.probs.size(), [&](std::size_t idx) {
    const int k = static_cast<int>(idx);
    double p = 0.0;
    for (const Atom& a : mu.atoms()) p += a.mass * binomial_pmf(n, k, a.location);
    if (part) {
      if (closed_beta) {
        p += w * beta_binomial_pmf(n, k, beta->alpha, beta->beta);
      } else {
        const double lc = log_binomial_coefficient(n, k);
        const double peak[] = {static_cast<double>(k) / n};
        const QuadratureResult r = mu.integrate_density(
            [&](const DensityPoint& d) {
              if (d.p == 0.0) return 0.0;
              return std::exp(lc + log_kernel(n, k, d.t, d.tc)) * d.p;
            },
            0.0, 1.0, cfg, peak);
        if (!r.converged) {
          std::ostringstream os;
          os << "mean_law: quadrature for cell k=" << k << " (n=" << n << ") did not converge (estimate "
             << r.value << ", achieved error " << r.error << ")";
          throw QuadratureFailure(os.str(), r.value, r.error);
        }
        p += w * r.value;
      }
    }
    law.probs[idx] = p;
  });

  double total = 0.0;
  double mean = 0.0;
  for (std::size_t k = 0; k < law.probs.size(); ++k) {
    double& p = law.probs[k];
    if (p < kUnderflowClamp) {
      if (p != 0.0) law.clamped_tail = true;
      p = 0.0;
    }
    total += p;
    mean += static_cast<double>(k) / n * p;
  }
  if (std::fabs(total - 1.0) > kNormalizationTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "mean_law: probabilities sum to " << total << " (n=" << n << ")";
    throw InvariantViolation(os.str());
  }
  if (std::fabs(mean - law.mu_mean) > kMeanTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "mean_law: law mean " << mean << " differs from E[theta] = " << law.mu_mean << " (n=" << n << ")";
    throw InvariantViolation(os.str());
  }
  return law;
}

double mean_law_cdf(const ExactMeanLaw& law, double x) {
  if (x < 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double total = 0.0;
  for (int k = 0; k <= law.n; ++k) {
    if (static_cast<double>(k) / law.n > x) break;
    total += law.probs[static_cast<std::size_t>(k)];
  }
  return total;
}

}  // namespace definetti
