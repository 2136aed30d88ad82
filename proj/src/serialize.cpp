// Licensed under the Apache License 2.0 (see LICENSE file).

#include "definetti/serialize.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace definetti {

namespace {

using nlohmann::json;

std::string field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json optional_number(const std::optional<double>& v) { return v ? number_or_null(*v) : json(nullptr); }

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string law_to_csv(const ExactMeanLaw& law) {
  std::string out = "k,k_over_n,prob\n";
  for (int k = 0; k <= law.n; ++k) {
    out += std::to_string(k) + ',' + format_double(static_cast<double>(k) / law.n) + ',' +
           format_double(law.probs[static_cast<std::size_t>(k)]) + '\n';
  }
  return out;
}

std::string reports_to_csv(std::span<const DistanceReport> reports) {
  bool empirical = false;
  for (const auto& r : reports) empirical = empirical || r.dw_empirical.has_value();
  std::string out = "n,dw_exact,dk,dw_perturbed,lower,upper_crude,upper_smooth,gap_bound,dual_psi";
  out += empirical ? ",dw_empirical\n" : "\n";
  for (const auto& r : reports) {
    out += std::to_string(r.n) + ',' + field(r.dw_exact) + ',' + field(r.dk) + ',' + field(r.dw_perturbed) + ',' +
           format_double(r.lower_bound) + ',' + format_double(r.upper_crude) + ',' + field(r.upper_smooth) + ',' +
           format_double(r.equivalence_gap_bound) + ',' + field(r.dual_lower_psi);
    if (empirical) out += ',' + field(r.dw_empirical);
    out += '\n';
  }
  return out;
}

std::string reports_to_json(std::span<const DistanceReport> reports) {
  json rows = json::array();
  for (const auto& r : reports) {
    json row{{"n", r.n},
             {"dw_exact", optional_number(r.dw_exact)},
             {"dk", optional_number(r.dk)},
             {"dw_perturbed", optional_number(r.dw_perturbed)},
             {"lower_bound", r.lower_bound},
             {"upper_crude", r.upper_crude},
             {"upper_smooth", optional_number(r.upper_smooth)},
             {"equivalence_gap_bound", r.equivalence_gap_bound},
             {"dual_lower_psi", optional_number(r.dual_lower_psi)}};
    if (r.dw_empirical) row["dw_empirical"] = *r.dw_empirical;
    rows.push_back(std::move(row));
  }
  return rows.dump(2) + '\n';
}

std::string empirical_to_csv(const EmpiricalLaw& emp) {
  json meta{{"n", emp.n},
            {"replications", emp.replications},
            {"seed", emp.seed},
            {"generator", emp.generator},
            {"source", emp.source.empty() ? json(nullptr) : json::parse(emp.source)}};
  std::string out = "# " + meta.dump() + "\nk,count\n";
  for (std::size_t k = 0; k < emp.counts.size(); ++k) {
    out += std::to_string(k) + ',' + std::to_string(emp.counts[k]) + '\n';
  }
  return out;
}

std::string rate_fit_to_csv(const RateFit& fit) {
  std::string out = "n,distance,fitted,residual\n";
  for (std::size_t i = 0; i < fit.ns.size(); ++i) {
    const double fitted = std::exp(fit.intercept + fit.slope * std::log(static_cast<double>(fit.ns[i])));
    out += std::to_string(fit.ns[i]) + ',' + format_double(fit.distances[i]) + ',' + format_double(fitted) + ',' +
           format_double(std::log(fit.distances[i]) - std::log(fitted)) + '\n';
  }
  return out;
}

std::string rate_fit_to_json(const RateFit& fit) {
  json j{{"slope", fit.slope},
         {"intercept", fit.intercept},
         {"max_residual", fit.max_residual},
         {"ns", fit.ns},
         {"distances", fit.distances}};
  return j.dump(2) + '\n';
}

std::string checks_to_json(std::span<const CheckResult> checks) {
  json rows = json::array();
  bool ok = !checks.empty();
  for (const auto& c : checks) {
    ok = ok && c.passed();
    json row{{"criterion", c.criterion},
             {"check_name", c.name},
             {"status", c.status},
             {"measured", number_or_null(c.measured)},
             {"bound", number_or_null(c.bound)},
             {"margin", number_or_null(c.margin)}};
    if (!c.detail.empty()) row["detail"] = c.detail;
    rows.push_back(std::move(row));
  }
  json out{{"all_passed", ok}, {"checks", rows}};
  return out.dump(2) + '\n';
}

}  // namespace definetti
