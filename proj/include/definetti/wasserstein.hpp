// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "definetti/exact_laws.hpp"
#include "definetti/measures.hpp"

namespace definetti {

/// A CDF on [0, 1] that the cell integrator can compare a grid law against.
class CdfTarget {
 public:
  virtual ~CdfTarget() = default;
  virtual double cdf(double x) const = 0;
  virtual double cdf_left(double x) const = 0;
  /// int_a^b (F(x) - F(a)) dx. Only called when F has no jump in (a, b).
  virtual double continuous_excess(double a, double b) const = 0;
  /// Locations of the jumps of F.
  virtual std::vector<double> jumps() const = 0;
};

class MeasureCdf final : public CdfTarget {
 public:
  explicit MeasureCdf(const MixingMeasure& mu) : mu_(mu) {}
  double cdf(double x) const override { return mu_.cdf(x); }
  double cdf_left(double x) const override { return mu_.cdf_left(x); }
  double continuous_excess(double a, double b) const override { return mu_.continuous_excess(a, b); }
  std::vector<double> jumps() const override;

 private:
  const MixingMeasure& mu_;
};

/// Step CDF of a law on the grid {0, 1/n, ..., 1}.
class GridStepCdf final : public CdfTarget {
 public:
  /// probs[k] is the mass at k/n; probs.size() = n + 1.
  explicit GridStepCdf(std::span<const double> probs);

  int n() const { return n_; }
  double cdf(double x) const override;
  double cdf_left(double x) const override;
  double continuous_excess(double, double) const override { return 0.0; }
  std::vector<double> jumps() const override;

 private:
  /// Largest k with k/n <= x, or -1.
  int index(double x) const;

  int n_;
  std::vector<double> cumulative_;
};

struct CellDistances {
  double wasserstein;  // int |F_law - F_target|
  double kolmogorov;   // sup |F_law - F_target|
};

/// Exact L1 and sup distances between a grid step CDF and a target CDF,
/// integrating the target's continuous part analytically on each cell.
CellDistances cell_distances(std::span<const double> probs, const CdfTarget& target);

/// W1 distance between the exact law of the empirical mean and mu.
double dw_mean_vs_prior(const ExactMeanLaw& law, const MixingMeasure& mu);

/// Kolmogorov distance between the exact law and mu.
double dk_mean_vs_prior(const ExactMeanLaw& law, const MixingMeasure& mu);

/// W1 distance between mu and the law of theta + sqrt(theta (1 - theta)) Z / sqrt(n).
/// Requires mu({0, 1}) = 0.
double dw_perturbed_prior(const MixingMeasure& mu, long n, const QuadratureConfig& cfg);

/// E[|psi(theta + f(theta) Z / sqrt(n)) - psi(theta)|]-type dual bound with
/// psi = |x - 1/2|, computed exactly in terms of the normal tail integral.
double dual_lower_bound_abs(const MixingMeasure& mu, long n, const QuadratureConfig& cfg);

/// E[psi(mean)] - E[psi(theta)] for psi(x) = x (x - 1); a 1-Lipschitz test
/// function on [0, 1], hence a lower bound on the W1 distance.
double dual_lower_bound_psi(const ExactMeanLaw& law, const MixingMeasure& mu);

struct ChenCheck {
  double lhs;  // int |F_n(z) - Phi(z)| dz for the standardized Binomial(n, t)
  double rhs;  // (t^2 + (1 - t)^2) / sqrt(n t (1 - t))
  bool passed() const { return lhs <= rhs; }
};

/// L1 Berry-Esseen check for a standardized Binomial(n, t), 0 < t < 1.
ChenCheck chen_bound_check(double t, long n);

/// Every distance and bound at one (mu, n).
struct DistanceReport {
  long n = 0;
  std::optional<double> dw_exact;
  std::optional<double> dk;
  std::optional<double> dw_perturbed;
  double lower_bound = 0.0;      // E[theta (1 - theta)] / n
  double upper_crude = 0.0;      // sqrt(E[theta (1 - theta)] / n)
  std::optional<double> upper_smooth;  // C2 / n, density measures only
  double equivalence_gap_bound = 0.0;  // E[theta^2 + (1 - theta)^2] / n
  std::optional<double> dual_lower_psi;
  std::optional<double> dw_empirical;  // Monte Carlo estimate, urn_mc mode only

  /// Descriptions of every violated inequality; empty when consistent.
  std::vector<std::string> violations() const;
};

struct ReportOptions {
  bool exact = true;
  bool perturbed = true;
};

/// Fills a DistanceReport; throws InvariantViolation naming the measure, n
/// and the inequality when the computed values are inconsistent.
DistanceReport distance_report(const MixingMeasure& mu, long n, const QuadratureConfig& cfg,
                               ReportOptions options = {});

}  // namespace definetti
