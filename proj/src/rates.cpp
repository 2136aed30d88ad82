// Licensed under the Apache License 2.0 (see LICENSE file).

#include "definetti/rates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "definetti/error.hpp"
#include "definetti/parallel.hpp"
#include "definetti/urn.hpp"

namespace definetti {

RateFit fit_rate(std::span<const long> ns, std::span<const double> distances) {
  if (ns.size() != distances.size()) throw InvalidArgument("fit_rate: ns and distances differ in length");
  if (ns.size() < 4) throw InvalidArgument("fit_rate: need at least 4 points");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 1) throw InvalidArgument("fit_rate: n must be >= 1");
    if (i > 0 && ns[i] <= ns[i - 1]) throw InvalidArgument("fit_rate: ns must be strictly increasing");
    if (!(distances[i] > 0.0) || !std::isfinite(distances[i])) {
      throw InvalidArgument("fit_rate: distances must be positive and finite");
    }
  }
  if (static_cast<double>(ns.back()) < 10.0 * static_cast<double>(ns.front())) {
    throw InvalidArgument("fit_rate: ns must span at least one decade");
  }

  const std::size_t m = ns.size();
  std::vector<double> x(m);
  std::vector<double> y(m);
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = std::log(static_cast<double>(ns[i]));
    y[i] = std::log(distances[i]);
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  RateFit fit;
  fit.ns.assign(ns.begin(), ns.end());
  fit.distances.assign(distances.begin(), distances.end());
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < m; ++i) {
    fit.max_residual = std::max(fit.max_residual, std::fabs(y[i] - fit.intercept - fit.slope * x[i]));
  }
  return fit;
}

std::vector<long> log_spaced_grid(long lo, long hi, int count) {
  if (lo < 1 || hi < lo || count < 1) throw InvalidArgument("log_spaced_grid: need 1 <= lo <= hi, count >= 1");
  std::vector<long> out;
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi));
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    out.push_back(std::lround(std::exp(a + t * (b - a))));
  }
  out.front() = lo;
  if (count > 1) out.back() = hi;
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const char* to_string(CurveMode mode) {
  switch (mode) {
    case CurveMode::exact: return "exact";
    case CurveMode::perturbed: return "perturbed";
    case CurveMode::both: return "both";
    case CurveMode::urn_mc: return "urn_mc";
  }
  return "unknown";
}

CurveMode parse_curve_mode(const std::string& text) {
  for (CurveMode m : {CurveMode::exact, CurveMode::perturbed, CurveMode::both, CurveMode::urn_mc}) {
    if (text == to_string(m)) return m;
  }
  throw InvalidArgument("unknown curve mode '" + text + "' (expected exact, perturbed, both or urn_mc)");
}

void RunConfig::validate() const {
  if (n_grid.empty()) throw InvalidArgument("RunConfig: n_grid is empty");
  for (long n : n_grid) {
    if (n < 1) throw InvalidArgument("RunConfig: every n must be >= 1");
  }
  if (mode == CurveMode::urn_mc && replications < 1) throw InvalidArgument("RunConfig: replications must be >= 1");
  quadrature.validate();
}

std::vector<DistanceReport> run_distance_curve(const RunConfig& cfg) {
  cfg.validate();
  ReportOptions options;
  options.exact = cfg.mode != CurveMode::perturbed;
  options.perturbed = cfg.mode == CurveMode::perturbed || cfg.mode == CurveMode::both;
  std::vector<DistanceReport> out(cfg.n_grid.size());
  parallel_for(out.size(), [&](std::size_t i) {
    const long n = cfg.n_grid[i];
    out[i] = distance_report(cfg.measure, n, cfg.quadrature, options);
    if (cfg.mode == CurveMode::urn_mc) {
      if (n > 100000) throw InvalidArgument("run_distance_curve: urn_mc mode limited to n <= 10^5");
      const EmpiricalLaw emp =
          simulate_exchangeable(cfg.measure, static_cast<int>(n), cfg.replications, cfg.seed + static_cast<std::uint64_t>(i));
      out[i].dw_empirical = empirical_dw(emp, cfg.measure);
    }
  });
  return out;
}

std::vector<std::string> monotonicity_warnings(std::span<const DistanceReport> reports) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const auto& prev = reports[i - 1];
    const auto& cur = reports[i];
    if (prev.dw_exact && cur.dw_exact && cur.n > prev.n && *cur.dw_exact > *prev.dw_exact) {
      std::ostringstream os;
      os.precision(17);
      os << "dw_exact increased from " << *prev.dw_exact << " (n=" << prev.n << ") to " << *cur.dw_exact
         << " (n=" << cur.n << ")";
      out.push_back(os.str());
    }
  }
  return out;
}

double compare_constant(const MixingMeasure& beta_measure, double external_constant) {
  if (beta_measure.kind() != MeasureKind::beta) {
    throw InvalidArgument(std::string("compare_constant: expected a Beta measure, got '") +
                          to_string(beta_measure.kind()) + "'");
  }
  if (!(external_constant > 0.0) || !std::isfinite(external_constant)) {
    throw InvalidArgument("compare_constant: external constant must be positive and finite");
  }
  return *bound_constants(beta_measure, beta_measure.quadrature()).c_alpha_beta / external_constant;
}

}  // namespace definetti
