// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <span>
#include <string>

#include "definetti/exact_laws.hpp"
#include "definetti/rates.hpp"
#include "definetti/urn.hpp"
#include "definetti/wasserstein.hpp"

namespace definetti {

/// Shortest decimal string that reads back to the same double.
std::string format_double(double x);

/// Columns k, k_over_n, prob.
std::string law_to_csv(const ExactMeanLaw& law);

/// Columns n, dw_exact, dk, dw_perturbed, lower, upper_crude, upper_smooth,
/// gap_bound, dual_psi; a dw_empirical column is appended when any row has
/// one. Missing values are empty fields.
std::string reports_to_csv(std::span<const DistanceReport> reports);
std::string reports_to_json(std::span<const DistanceReport> reports);

/// First line "# {metadata json}", then columns k, count.
std::string empirical_to_csv(const EmpiricalLaw& emp);

/// Columns n, distance, fitted, residual.
std::string rate_fit_to_csv(const RateFit& fit);
std::string rate_fit_to_json(const RateFit& fit);

std::string checks_to_json(std::span<const CheckResult> checks);

}  // namespace definetti
