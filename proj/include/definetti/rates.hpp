// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "definetti/measures.hpp"
#include "definetti/quadrature.hpp"
#include "definetti/wasserstein.hpp"

namespace definetti {

/// Least-squares fit of ln d = intercept + slope ln n.
struct RateFit {
  std::vector<long> ns;
  std::vector<double> distances;
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

/// Needs at least 4 strictly increasing n spanning a decade and positive
/// distances.
RateFit fit_rate(std::span<const long> ns, std::span<const double> distances);

/// `count` integers spread evenly in log scale over [lo, hi], duplicates
/// removed.
std::vector<long> log_spaced_grid(long lo, long hi, int count);

enum class CurveMode { exact, perturbed, both, urn_mc };

const char* to_string(CurveMode mode);
CurveMode parse_curve_mode(const std::string& text);

struct RunConfig {
  MixingMeasure measure = MixingMeasure::beta(1.0, 1.0);
  std::vector<long> n_grid;
  CurveMode mode = CurveMode::exact;
  QuadratureConfig quadrature{};
  std::uint64_t seed = 0;
  /// Replications per n in urn_mc mode.
  std::int64_t replications = 100000;
  std::string output_path;

  void validate() const;
};

/// One report per n, in grid order. Invariants are checked per row; a
/// violation throws InvariantViolation naming the measure, n and the
/// inequality.
std::vector<DistanceReport> run_distance_curve(const RunConfig& cfg);

/// Soft check: dw_exact nonincreasing along the grid. Returns a warning per
/// increase (empty when monotone).
std::vector<std::string> monotonicity_warnings(std::span<const DistanceReport> reports);

/// C_{alpha,beta} / external_constant for a Beta measure.
double compare_constant(const MixingMeasure& beta_measure, double external_constant);

/// One line of the verification report.
struct CheckResult {
  std::string criterion;  // short id of the acceptance criterion
  std::string name;       // which instance was checked
  std::string status;     // "pass", "fail" or "inconclusive"
  double measured = 0.0;
  double bound = 0.0;
  /// Positive when the check passes with room to spare.
  double margin = 0.0;
  std::string detail;

  bool passed() const { return status == "pass"; }
};

struct SuiteConfig {
  QuadratureConfig quadrature{};
  std::uint64_t seed = 20240601;
  std::int64_t urn_replications = 1000000;
  int bootstrap_resamples = 200;
};

inline constexpr int kCriterionCount = 10;

/// Short identifier of criterion `id` (1-based).
const char* criterion_name(int id);

/// Runs a single acceptance criterion.
std::vector<CheckResult> run_criterion(int id, const SuiteConfig& cfg);

/// Runs all criteria in order.
std::vector<CheckResult> verify_suite(const SuiteConfig& cfg);

bool all_passed(std::span<const CheckResult> results);

}  // namespace definetti
