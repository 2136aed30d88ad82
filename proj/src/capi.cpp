// Licensed under the Apache License 2.0 (see LICENSE file).

#include "definetti/definetti.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>
#include <thread>

#include "definetti/error.hpp"
#include "definetti/exact_laws.hpp"
#include "definetti/measures.hpp"
#include "definetti/parallel.hpp"
#include "definetti/rates.hpp"
#include "definetti/serialize.hpp"
#include "definetti/urn.hpp"
#include "definetti/wasserstein.hpp"

struct dft_measure {
  definetti::MixingMeasure mu;
};

struct dft_mean_law {
  definetti::ExactMeanLaw law;
};

struct dft_empirical_law {
  definetti::EmpiricalLaw emp;
};

namespace {

using namespace definetti;

thread_local std::string last_error;

constexpr double kAbsent = std::numeric_limits<double>::quiet_NaN();

dft_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return DFT_INVALID_ARGUMENT;
    case ErrorCode::quadrature_failure: return DFT_QUADRATURE_FAILURE;
    case ErrorCode::divergent_integral: return DFT_DIVERGENT_INTEGRAL;
    case ErrorCode::bisection_failure: return DFT_BISECTION_FAILURE;
    case ErrorCode::invariant_violation: return DFT_INVARIANT_VIOLATION;
    case ErrorCode::overflow: return DFT_OVERFLOW;
    case ErrorCode::parse_error: return DFT_PARSE_ERROR;
    case ErrorCode::iteration_limit: return DFT_ITERATION_LIMIT;
  }
  return DFT_INTERNAL_ERROR;
}

template <class F>
dft_status guard(F&& body) {
  try {
    body();
    last_error.clear();
    return DFT_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return DFT_OUT_OF_MEMORY;
  } catch (const std::exception& e) {
    last_error = e.what();
    return DFT_INTERNAL_ERROR;
  }
}

template <class T>
T& need(T* p, const char* what) {
  if (p == nullptr) throw InvalidArgument(std::string(what) + " is null");
  return *p;
}

template <class T>
const T& need(const T* p, const char* what) {
  if (p == nullptr) throw InvalidArgument(std::string(what) + " is null");
  return *p;
}

QuadratureConfig convert(const dft_quadrature_config* c) {
  QuadratureConfig cfg;
  if (c == nullptr) return cfg;
  if (c->scheme != DFT_GAUSS_KRONROD_ADAPTIVE && c->scheme != DFT_TANH_SINH) {
    throw InvalidArgument("unknown quadrature scheme");
  }
  cfg.scheme = c->scheme == DFT_TANH_SINH ? QuadratureScheme::tanh_sinh : QuadratureScheme::gauss_kronrod_adaptive;
  cfg.max_subdivisions = c->max_subdivisions;
  cfg.accuracy.abs_tol = c->abs_tol;
  cfg.accuracy.rel_tol = c->rel_tol;
  cfg.validate();
  return cfg;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<Atom> atoms_from(const double* locations, const double* masses, size_t count) {
  if (count > 0 && (locations == nullptr || masses == nullptr)) throw InvalidArgument("atom arrays are null");
  std::vector<Atom> atoms(count);
  for (size_t i = 0; i < count; ++i) atoms[i] = {locations[i], masses[i]};
  return atoms;
}

double value_or_nan(const std::optional<double>& v) { return v ? *v : kAbsent; }

std::optional<double> nan_to_optional(double v) {
  if (std::isnan(v)) return std::nullopt;
  return v;
}

dft_distance_report to_c(const DistanceReport& r) {
  return dft_distance_report{r.n,
                             value_or_nan(r.dw_exact),
                             value_or_nan(r.dk),
                             value_or_nan(r.dw_perturbed),
                             r.lower_bound,
                             r.upper_crude,
                             value_or_nan(r.upper_smooth),
                             r.equivalence_gap_bound,
                             value_or_nan(r.dual_lower_psi),
                             value_or_nan(r.dw_empirical)};
}

std::vector<DistanceReport> from_c(const dft_distance_report* reports, size_t count) {
  if (count > 0 && reports == nullptr) throw InvalidArgument("reports is null");
  std::vector<DistanceReport> out(count);
  for (size_t i = 0; i < count; ++i) {
    const dft_distance_report& c = reports[i];
    DistanceReport& r = out[i];
    r.n = static_cast<long>(c.n);
    r.dw_exact = nan_to_optional(c.dw_exact);
    r.dk = nan_to_optional(c.dk);
    r.dw_perturbed = nan_to_optional(c.dw_perturbed);
    r.lower_bound = c.lower_bound;
    r.upper_crude = c.upper_crude;
    r.upper_smooth = nan_to_optional(c.upper_smooth);
    r.equivalence_gap_bound = c.equivalence_gap_bound;
    r.dual_lower_psi = nan_to_optional(c.dual_lower_psi);
    r.dw_empirical = nan_to_optional(c.dw_empirical);
  }
  return out;
}

CurveMode curve_mode(int mode) {
  switch (mode) {
    case DFT_MODE_EXACT: return CurveMode::exact;
    case DFT_MODE_PERTURBED: return CurveMode::perturbed;
    case DFT_MODE_BOTH: return CurveMode::both;
    case DFT_MODE_URN_MC: return CurveMode::urn_mc;
    default: throw InvalidArgument("unknown curve mode " + std::to_string(mode));
  }
}

UrnConfig urn_config(int64_t A, int64_t B, int64_t m, int64_t n, int64_t replications, uint64_t seed) {
  UrnConfig cfg;
  cfg.A = A;
  cfg.B = B;
  cfg.m = m;
  cfg.n = n;
  cfg.replications = replications;
  cfg.seed = seed;
  return cfg;
}

std::vector<long> to_longs(const int64_t* ns, size_t count) {
  if (count > 0 && ns == nullptr) throw InvalidArgument("ns is null");
  return std::vector<long>(ns, ns + count);
}

dft_status set_measure(dft_measure** out, auto make) {
  return guard([&] {
    need(out, "out");
    *out = new dft_measure{make()};
  });
}

}  // namespace

extern "C" {

const char* dft_status_string(dft_status status) {
  switch (status) {
    case DFT_OK: return "ok";
    case DFT_INVALID_ARGUMENT: return "invalid argument";
    case DFT_QUADRATURE_FAILURE: return "quadrature failure";
    case DFT_DIVERGENT_INTEGRAL: return "divergent integral";
    case DFT_BISECTION_FAILURE: return "bisection failure";
    case DFT_INVARIANT_VIOLATION: return "invariant violation";
    case DFT_OVERFLOW: return "overflow";
    case DFT_PARSE_ERROR: return "parse error";
    case DFT_ITERATION_LIMIT: return "iteration limit";
    case DFT_OUT_OF_MEMORY: return "out of memory";
    case DFT_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

const char* dft_last_error(void) { return last_error.c_str(); }

void dft_string_free(char* s) { std::free(s); }

const char* dft_version(void) { return "0.1.0"; }

void dft_set_worker_count(size_t workers) {
  set_worker_count(workers == 0 ? std::max<std::size_t>(1, std::thread::hardware_concurrency()) : workers);
}

void dft_quadrature_config_default(dft_quadrature_config* out) {
  if (out == nullptr) return;
  const QuadratureConfig cfg;
  out->scheme = cfg.scheme == QuadratureScheme::tanh_sinh ? DFT_TANH_SINH : DFT_GAUSS_KRONROD_ADAPTIVE;
  out->max_subdivisions = cfg.max_subdivisions;
  out->abs_tol = cfg.accuracy.abs_tol;
  out->rel_tol = cfg.accuracy.rel_tol;
}

dft_status dft_measure_beta(double alpha, double beta, dft_measure** out) {
  return set_measure(out, [&] { return MixingMeasure::beta(alpha, beta); });
}

dft_status dft_measure_atomic(const double* locations, const double* masses, size_t count, dft_measure** out) {
  return set_measure(out, [&] { return MixingMeasure::atomic(atoms_from(locations, masses, count)); });
}

dft_status dft_measure_power_spike(double gamma, dft_measure** out) {
  return set_measure(out, [&] { return MixingMeasure::power_spike(gamma); });
}

dft_status dft_measure_composite_beta(const double* locations, const double* masses, size_t count, double alpha,
                                      double beta, dft_measure** out) {
  return set_measure(out, [&] {
    return MixingMeasure::composite(atoms_from(locations, masses, count), BetaDensity{alpha, beta});
  });
}

dft_status dft_measure_smooth(dft_density_fn p, dft_density_fn p_prime, void* user, double exponent_lo,
                              double exponent_hi, const dft_envelope* envelope, const dft_quadrature_config* cfg,
                              dft_measure** out) {
  return set_measure(out, [&] {
    if (p == nullptr || p_prime == nullptr) throw InvalidArgument("density callbacks are null");
    SmoothDensity d;
    d.p = [p, user](double x) { return p(x, user); };
    d.p_prime = [p_prime, user](double x) { return p_prime(x, user); };
    d.exponent_lo = exponent_lo;
    d.exponent_hi = exponent_hi;
    if (envelope != nullptr) {
      d.envelope = RejectionEnvelope{envelope->proposal_alpha, envelope->proposal_beta, envelope->bound};
    }
    return MixingMeasure::smooth(std::move(d), convert(cfg));
  });
}

dft_status dft_measure_from_json(const char* json, dft_measure** out) {
  return set_measure(out, [&] { if (json == nullptr) throw InvalidArgument("json is null");
    return MixingMeasure::from_json(json); });
}

dft_status dft_measure_to_json(const dft_measure* mu, char** out) {
  return guard([&] { need(out, "out") = copy_string(need(mu, "measure").mu.to_json()); });
}

void dft_measure_free(dft_measure* mu) { delete mu; }

dft_status dft_measure_cdf(const dft_measure* mu, double x, double* out) {
  return guard([&] { need(out, "out") = need(mu, "measure").mu.cdf(x); });
}

dft_status dft_measure_partial_mean(const dft_measure* mu, double a, double b, double* out) {
  return guard([&] { need(out, "out") = need(mu, "measure").mu.partial_mean(a, b); });
}

dft_status dft_measure_moments(const dft_measure* mu, double* mean, double* theta_one_minus_theta,
                               double* sq_plus_comp_sq) {
  return guard([&] {
    const MixingMeasure& m = need(mu, "measure").mu;
    if (mean) *mean = m.mean();
    if (theta_one_minus_theta) *theta_one_minus_theta = moment_theta_one_minus_theta(m);
    if (sq_plus_comp_sq) *sq_plus_comp_sq = moment_sq_plus_comp_sq(m);
  });
}

dft_status dft_measure_boundary_mass(const dft_measure* mu, double* out) {
  return guard([&] { need(out, "out") = need(mu, "measure").mu.boundary_mass(); });
}

dft_status dft_bound_constants(const dft_measure* mu, const dft_quadrature_config* cfg, int force_quadrature,
                               double* c1, double* c2, double* c_alpha_beta) {
  return guard([&] {
    const BoundConstants k = bound_constants(need(mu, "measure").mu, convert(cfg),
                                             force_quadrature ? ConstantsRoute::quadrature : ConstantsRoute::automatic);
    if (c1) *c1 = k.c1;
    if (c2) *c2 = k.c2;
    if (c_alpha_beta) *c_alpha_beta = value_or_nan(k.c_alpha_beta);
  });
}

dft_status dft_lemma_F(double alpha, double beta, double a, double b, double* out) {
  return guard([&] { need(out, "out") = lemma_F(alpha, beta, a, b); });
}

dft_status dft_kill_boundary(const dft_measure* mu, dft_measure** interior, double* q) {
  return guard([&] {
    auto [m, mass] = kill_boundary(need(mu, "measure").mu);
    need(interior, "interior") = new dft_measure{std::move(m)};
    if (q) *q = mass;
  });
}

dft_status dft_mean_law_compute(const dft_measure* mu, int n, const dft_quadrature_config* cfg, int force_quadrature,
                                dft_mean_law** out) {
  return guard([&] {
    need(out, "out");
    ExactMeanLaw law = mean_law(need(mu, "measure").mu, n, convert(cfg),
                                force_quadrature ? LawRoute::quadrature : LawRoute::automatic);
    *out = new dft_mean_law{std::move(law)};
  });
}

int dft_mean_law_n(const dft_mean_law* law) { return law ? law->law.n : -1; }

int dft_mean_law_clamped(const dft_mean_law* law) { return law && law->law.clamped_tail ? 1 : 0; }

dft_status dft_mean_law_probs(const dft_mean_law* law, double* out, size_t capacity) {
  return guard([&] {
    const auto& probs = need(law, "law").law.probs;
    if (out == nullptr || capacity < probs.size()) throw InvalidArgument("output buffer too small");
    std::copy(probs.begin(), probs.end(), out);
  });
}

dft_status dft_mean_law_cdf(const dft_mean_law* law, double x, double* out) {
  return guard([&] { need(out, "out") = mean_law_cdf(need(law, "law").law, x); });
}

dft_status dft_mean_law_to_csv(const dft_mean_law* law, char** out) {
  return guard([&] { need(out, "out") = copy_string(law_to_csv(need(law, "law").law)); });
}

void dft_mean_law_free(dft_mean_law* law) { delete law; }

dft_status dft_dw_mean_vs_prior(const dft_mean_law* law, const dft_measure* mu, double* out) {
  return guard([&] { need(out, "out") = dw_mean_vs_prior(need(law, "law").law, need(mu, "measure").mu); });
}

dft_status dft_dk_mean_vs_prior(const dft_mean_law* law, const dft_measure* mu, double* out) {
  return guard([&] { need(out, "out") = dk_mean_vs_prior(need(law, "law").law, need(mu, "measure").mu); });
}

dft_status dft_grid_law_distances(const double* p, const double* q, size_t count, double* dw, double* dk) {
  return guard([&] {
    if (p == nullptr || q == nullptr) throw InvalidArgument("probability arrays are null");
    const CellDistances d = cell_distances({p, count}, GridStepCdf({q, count}));
    if (dw) *dw = d.wasserstein;
    if (dk) *dk = d.kolmogorov;
  });
}

dft_status dft_dw_perturbed_prior(const dft_measure* mu, int64_t n, const dft_quadrature_config* cfg, double* out) {
  return guard([&] { need(out, "out") = dw_perturbed_prior(need(mu, "measure").mu, static_cast<long>(n), convert(cfg)); });
}

dft_status dft_dual_lower_bound_psi(const dft_mean_law* law, const dft_measure* mu, double* out) {
  return guard([&] { need(out, "out") = dual_lower_bound_psi(need(law, "law").law, need(mu, "measure").mu); });
}

dft_status dft_dual_lower_bound_abs(const dft_measure* mu, int64_t n, const dft_quadrature_config* cfg, double* out) {
  return guard(
      [&] { need(out, "out") = dual_lower_bound_abs(need(mu, "measure").mu, static_cast<long>(n), convert(cfg)); });
}

dft_status dft_chen_bound_check(double t, int64_t n, double* lhs, double* rhs) {
  return guard([&] {
    const ChenCheck c = chen_bound_check(t, static_cast<long>(n));
    if (lhs) *lhs = c.lhs;
    if (rhs) *rhs = c.rhs;
  });
}

dft_status dft_distance_report_compute(const dft_measure* mu, int64_t n, const dft_quadrature_config* cfg, int mode,
                                       dft_distance_report* out) {
  return dft_run_distance_curve(mu, &n, 1, mode, cfg, 0, 1, out);
}

dft_status dft_run_distance_curve(const dft_measure* mu, const int64_t* ns, size_t count, int mode,
                                  const dft_quadrature_config* cfg, uint64_t seed, int64_t replications,
                                  dft_distance_report* out) {
  return guard([&] {
    if (out == nullptr) throw InvalidArgument("out is null");
    RunConfig run;
    run.measure = need(mu, "measure").mu;
    run.n_grid = to_longs(ns, count);
    run.mode = curve_mode(mode);
    run.quadrature = convert(cfg);
    run.seed = seed;
    run.replications = replications;
    const std::vector<DistanceReport> reports = run_distance_curve(run);
    for (size_t i = 0; i < reports.size(); ++i) out[i] = to_c(reports[i]);
  });
}

dft_status dft_reports_to_csv(const dft_distance_report* reports, size_t count, char** out) {
  return guard([&] { need(out, "out") = copy_string(reports_to_csv(from_c(reports, count))); });
}

dft_status dft_reports_to_json(const dft_distance_report* reports, size_t count, char** out) {
  return guard([&] { need(out, "out") = copy_string(reports_to_json(from_c(reports, count))); });
}

dft_status dft_simulate_urn(int64_t A, int64_t B, int64_t m, int64_t n, int64_t replications, uint64_t seed,
                            dft_empirical_law** out) {
  return guard([&] {
    need(out, "out");
    *out = new dft_empirical_law{simulate_urn(urn_config(A, B, m, n, replications, seed))};
  });
}

dft_status dft_simulate_exchangeable(const dft_measure* mu, int n, int64_t replications, uint64_t seed,
                                     dft_empirical_law** out) {
  return guard([&] {
    need(out, "out");
    *out = new dft_empirical_law{simulate_exchangeable(need(mu, "measure").mu, n, replications, seed)};
  });
}

dft_status dft_simulate_urn_patterns(int64_t A, int64_t B, int64_t m, int64_t n, int64_t replications, uint64_t seed,
                                     int64_t* counts, size_t capacity) {
  return guard([&] {
    const std::vector<std::int64_t> c = simulate_urn_patterns(urn_config(A, B, m, n, replications, seed));
    if (counts == nullptr || capacity < c.size()) throw InvalidArgument("output buffer too small");
    std::copy(c.begin(), c.end(), counts);
  });
}

dft_status dft_sample_mixing(const dft_measure* mu, int64_t count, uint64_t seed, double* out) {
  return guard([&] {
    if (out == nullptr) throw InvalidArgument("out is null");
    const std::vector<double> s = sample_mixing(need(mu, "measure").mu, count, seed);
    std::copy(s.begin(), s.end(), out);
  });
}

int dft_empirical_law_n(const dft_empirical_law* emp) { return emp ? emp->emp.n : -1; }

int64_t dft_empirical_law_replications(const dft_empirical_law* emp) { return emp ? emp->emp.replications : -1; }

dft_status dft_empirical_law_counts(const dft_empirical_law* emp, int64_t* out, size_t capacity) {
  return guard([&] {
    const auto& c = need(emp, "empirical law").emp.counts;
    if (out == nullptr || capacity < c.size()) throw InvalidArgument("output buffer too small");
    std::copy(c.begin(), c.end(), out);
  });
}

dft_status dft_empirical_law_to_csv(const dft_empirical_law* emp, char** out) {
  return guard([&] { need(out, "out") = copy_string(empirical_to_csv(need(emp, "empirical law").emp)); });
}

dft_status dft_empirical_dw(const dft_empirical_law* emp, const dft_measure* mu, double* out) {
  return guard([&] { need(out, "out") = empirical_dw(need(emp, "empirical law").emp, need(mu, "measure").mu); });
}

dft_status dft_empirical_dw_standard_error(const dft_empirical_law* emp, const dft_measure* mu, int resamples,
                                           uint64_t seed, double* out) {
  return guard([&] {
    need(out, "out") =
        empirical_dw_standard_error(need(emp, "empirical law").emp, need(mu, "measure").mu, resamples, seed);
  });
}

void dft_empirical_law_free(dft_empirical_law* emp) { delete emp; }

dft_status dft_total_variation(const double* p, const double* q, size_t count, double* out) {
  return guard([&] {
    if (p == nullptr || q == nullptr) throw InvalidArgument("probability arrays are null");
    need(out, "out") = total_variation({p, count}, {q, count});
  });
}

dft_status dft_fit_rate(const int64_t* ns, const double* distances, size_t count, double* slope, double* intercept,
                        double* max_residual) {
  return guard([&] {
    if (distances == nullptr) throw InvalidArgument("distances is null");
    const std::vector<long> n = to_longs(ns, count);
    const RateFit fit = fit_rate(n, {distances, count});
    if (slope) *slope = fit.slope;
    if (intercept) *intercept = fit.intercept;
    if (max_residual) *max_residual = fit.max_residual;
  });
}

dft_status dft_rate_fit_to_csv(const int64_t* ns, const double* distances, size_t count, char** out) {
  return guard([&] {
    if (distances == nullptr) throw InvalidArgument("distances is null");
    const std::vector<long> n = to_longs(ns, count);
    need(out, "out") = copy_string(rate_fit_to_csv(fit_rate(n, {distances, count})));
  });
}

dft_status dft_log_spaced_grid(int64_t lo, int64_t hi, int count, int64_t* out, size_t* written) {
  return guard([&] {
    const std::vector<long> grid = log_spaced_grid(static_cast<long>(lo), static_cast<long>(hi), count);
    if (out == nullptr) throw InvalidArgument("out is null");
    std::copy(grid.begin(), grid.end(), out);
    if (written) *written = grid.size();
  });
}

dft_status dft_compare_constant(const dft_measure* beta_measure, double external_constant, double* out) {
  return guard([&] { need(out, "out") = compare_constant(need(beta_measure, "measure").mu, external_constant); });
}

int dft_criterion_count(void) { return kCriterionCount; }

const char* dft_criterion_name(int id) {
  if (id < 1 || id > kCriterionCount) return nullptr;
  return criterion_name(id);
}

void dft_suite_config_default(dft_suite_config* out) {
  if (out == nullptr) return;
  const SuiteConfig cfg;
  dft_quadrature_config_default(&out->quadrature);
  out->seed = cfg.seed;
  out->urn_replications = cfg.urn_replications;
  out->bootstrap_resamples = cfg.bootstrap_resamples;
}

dft_status dft_verify(const dft_suite_config* cfg, int id, char** json, int* all_passed_out) {
  return guard([&] {
    SuiteConfig suite;
    if (cfg != nullptr) {
      suite.quadrature = convert(&cfg->quadrature);
      suite.seed = cfg->seed;
      suite.urn_replications = cfg->urn_replications;
      suite.bootstrap_resamples = cfg->bootstrap_resamples;
    }
    if (id < 0 || id > kCriterionCount) throw InvalidArgument("criterion id out of range");
    const std::vector<CheckResult> results = id == 0 ? verify_suite(suite) : run_criterion(id, suite);
    if (json) *json = copy_string(checks_to_json(results));
    if (all_passed_out) *all_passed_out = all_passed(results) ? 1 : 0;
  });
}

}  // extern "C"
