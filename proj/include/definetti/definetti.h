/* Licensed under the Apache License 2.0 (see LICENSE file). */

/*
 * C interface of the definetti library. Every function returns a
 * dft_status; on failure dft_last_error() holds a message for the calling
 * thread. Objects are opaque handles released with the matching *_free.
 * Strings returned through char** are released with dft_string_free.
 * Optional values in structs are NaN when absent.
 */

#ifndef DEFINETTI_DEFINETTI_H
#define DEFINETTI_DEFINETTI_H

#include <stddef.h>
#include <stdint.h>

#if defined(DEFINETTI_BUILDING_LIBRARY)
#define DFT_API __attribute__((visibility("default")))
#else
#define DFT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dft_status {
  DFT_OK = 0,
  DFT_INVALID_ARGUMENT = 1,
  DFT_QUADRATURE_FAILURE = 2,
  DFT_DIVERGENT_INTEGRAL = 3,
  DFT_BISECTION_FAILURE = 4,
  DFT_INVARIANT_VIOLATION = 5,
  DFT_OVERFLOW = 6,
  DFT_PARSE_ERROR = 7,
  DFT_ITERATION_LIMIT = 8,
  DFT_OUT_OF_MEMORY = 98,
  DFT_INTERNAL_ERROR = 99
} dft_status;

DFT_API const char* dft_status_string(dft_status status);
DFT_API const char* dft_last_error(void);
DFT_API void dft_string_free(char* s);
DFT_API const char* dft_version(void);

/* Number of worker threads used by parallel loops (0 = hardware default). */
DFT_API void dft_set_worker_count(size_t workers);

typedef enum dft_quadrature_scheme {
  DFT_GAUSS_KRONROD_ADAPTIVE = 0,
  DFT_TANH_SINH = 1
} dft_quadrature_scheme;

typedef struct dft_quadrature_config {
  int scheme; /* dft_quadrature_scheme */
  int max_subdivisions;
  double abs_tol;
  double rel_tol;
} dft_quadrature_config;

/* Functions taking a const dft_quadrature_config* accept NULL for the defaults. */
DFT_API void dft_quadrature_config_default(dft_quadrature_config* out);

/* ---- mixing measures ---------------------------------------------------- */

typedef struct dft_measure dft_measure;

typedef double (*dft_density_fn)(double x, void* user);

typedef struct dft_envelope {
  double proposal_alpha;
  double proposal_beta;
  double bound;
} dft_envelope;

DFT_API dft_status dft_measure_beta(double alpha, double beta, dft_measure** out);
DFT_API dft_status dft_measure_atomic(const double* locations, const double* masses, size_t count,
                                      dft_measure** out);
DFT_API dft_status dft_measure_power_spike(double gamma, dft_measure** out);
/* Atoms of total mass q < 1 plus (1 - q) Beta(alpha, beta). */
DFT_API dft_status dft_measure_composite_beta(const double* locations, const double* masses, size_t count,
                                              double alpha, double beta, dft_measure** out);
/* Density p with derivative p_prime; `user` must outlive the measure.
   envelope may be NULL (the measure then cannot be sampled). */
DFT_API dft_status dft_measure_smooth(dft_density_fn p, dft_density_fn p_prime, void* user,
                                      double exponent_lo, double exponent_hi, const dft_envelope* envelope,
                                      const dft_quadrature_config* cfg, dft_measure** out);
DFT_API dft_status dft_measure_from_json(const char* json, dft_measure** out);
DFT_API dft_status dft_measure_to_json(const dft_measure* mu, char** out);
DFT_API void dft_measure_free(dft_measure* mu);

DFT_API dft_status dft_measure_cdf(const dft_measure* mu, double x, double* out);
DFT_API dft_status dft_measure_partial_mean(const dft_measure* mu, double a, double b, double* out);
/* Any output pointer may be NULL. */
DFT_API dft_status dft_measure_moments(const dft_measure* mu, double* mean, double* theta_one_minus_theta,
                                       double* sq_plus_comp_sq);
DFT_API dft_status dft_measure_boundary_mass(const dft_measure* mu, double* out);
/* c_alpha_beta is NaN unless mu is Beta. */
DFT_API dft_status dft_bound_constants(const dft_measure* mu, const dft_quadrature_config* cfg,
                                       int force_quadrature, double* c1, double* c2, double* c_alpha_beta);
DFT_API dft_status dft_lemma_F(double alpha, double beta, double a, double b, double* out);
DFT_API dft_status dft_kill_boundary(const dft_measure* mu, dft_measure** interior, double* q);

/* ---- exact law of the empirical mean ------------------------------------ */

typedef struct dft_mean_law dft_mean_law;

/* force_quadrature != 0 bypasses the Beta-Binomial closed form. */
DFT_API dft_status dft_mean_law_compute(const dft_measure* mu, int n, const dft_quadrature_config* cfg,
                                        int force_quadrature, dft_mean_law** out);
DFT_API int dft_mean_law_n(const dft_mean_law* law);
DFT_API int dft_mean_law_clamped(const dft_mean_law* law);
/* Copies n + 1 probabilities; capacity must be at least n + 1. */
DFT_API dft_status dft_mean_law_probs(const dft_mean_law* law, double* out, size_t capacity);
DFT_API dft_status dft_mean_law_cdf(const dft_mean_law* law, double x, double* out);
DFT_API dft_status dft_mean_law_to_csv(const dft_mean_law* law, char** out);
DFT_API void dft_mean_law_free(dft_mean_law* law);

/* ---- distances ---------------------------------------------------------- */

DFT_API dft_status dft_dw_mean_vs_prior(const dft_mean_law* law, const dft_measure* mu, double* out);
DFT_API dft_status dft_dk_mean_vs_prior(const dft_mean_law* law, const dft_measure* mu, double* out);
/* W1 and sup distances between two laws on the grid {0, 1/(count-1), ..., 1}. */
DFT_API dft_status dft_grid_law_distances(const double* p, const double* q, size_t count, double* dw,
                                          double* dk);
DFT_API dft_status dft_dw_perturbed_prior(const dft_measure* mu, int64_t n, const dft_quadrature_config* cfg,
                                          double* out);
DFT_API dft_status dft_dual_lower_bound_psi(const dft_mean_law* law, const dft_measure* mu, double* out);
DFT_API dft_status dft_dual_lower_bound_abs(const dft_measure* mu, int64_t n, const dft_quadrature_config* cfg,
                                            double* out);
DFT_API dft_status dft_chen_bound_check(double t, int64_t n, double* lhs, double* rhs);

typedef enum dft_curve_mode {
  DFT_MODE_EXACT = 0,
  DFT_MODE_PERTURBED = 1,
  DFT_MODE_BOTH = 2,
  DFT_MODE_URN_MC = 3
} dft_curve_mode;

typedef struct dft_distance_report {
  int64_t n;
  double dw_exact;
  double dk;
  double dw_perturbed;
  double lower_bound;
  double upper_crude;
  double upper_smooth;
  double equivalence_gap_bound;
  double dual_lower_psi;
  double dw_empirical;
} dft_distance_report;

DFT_API dft_status dft_distance_report_compute(const dft_measure* mu, int64_t n, const dft_quadrature_config* cfg,
                                               int mode, dft_distance_report* out);
/* Fills `count` reports, one per entry of ns. seed and replications are
   used in DFT_MODE_URN_MC only. */
DFT_API dft_status dft_run_distance_curve(const dft_measure* mu, const int64_t* ns, size_t count, int mode,
                                          const dft_quadrature_config* cfg, uint64_t seed, int64_t replications,
                                          dft_distance_report* out);
DFT_API dft_status dft_reports_to_csv(const dft_distance_report* reports, size_t count, char** out);
DFT_API dft_status dft_reports_to_json(const dft_distance_report* reports, size_t count, char** out);

/* ---- Monte Carlo ------------------------------------------------------- */

typedef struct dft_empirical_law dft_empirical_law;

DFT_API dft_status dft_simulate_urn(int64_t A, int64_t B, int64_t m, int64_t n, int64_t replications,
                                    uint64_t seed, dft_empirical_law** out);
DFT_API dft_status dft_simulate_exchangeable(const dft_measure* mu, int n, int64_t replications, uint64_t seed,
                                             dft_empirical_law** out);
/* Counts of each 0-1 pattern (bit i = draw i + 1); capacity >= 2^n, n <= 20. */
DFT_API dft_status dft_simulate_urn_patterns(int64_t A, int64_t B, int64_t m, int64_t n, int64_t replications,
                                             uint64_t seed, int64_t* counts, size_t capacity);
DFT_API dft_status dft_sample_mixing(const dft_measure* mu, int64_t count, uint64_t seed, double* out);
DFT_API int dft_empirical_law_n(const dft_empirical_law* emp);
DFT_API int64_t dft_empirical_law_replications(const dft_empirical_law* emp);
DFT_API dft_status dft_empirical_law_counts(const dft_empirical_law* emp, int64_t* out, size_t capacity);
DFT_API dft_status dft_empirical_law_to_csv(const dft_empirical_law* emp, char** out);
DFT_API dft_status dft_empirical_dw(const dft_empirical_law* emp, const dft_measure* mu, double* out);
DFT_API dft_status dft_empirical_dw_standard_error(const dft_empirical_law* emp, const dft_measure* mu,
                                                   int resamples, uint64_t seed, double* out);
DFT_API void dft_empirical_law_free(dft_empirical_law* emp);
DFT_API dft_status dft_total_variation(const double* p, const double* q, size_t count, double* out);

/* ---- rates and verification -------------------------------------------- */

DFT_API dft_status dft_fit_rate(const int64_t* ns, const double* distances, size_t count, double* slope,
                                double* intercept, double* max_residual);
DFT_API dft_status dft_rate_fit_to_csv(const int64_t* ns, const double* distances, size_t count, char** out);
/* Writes at most `count` values and stores how many in *written. */
DFT_API dft_status dft_log_spaced_grid(int64_t lo, int64_t hi, int count, int64_t* out, size_t* written);
DFT_API dft_status dft_compare_constant(const dft_measure* beta_measure, double external_constant, double* out);

DFT_API int dft_criterion_count(void);
DFT_API const char* dft_criterion_name(int id);

typedef struct dft_suite_config {
  dft_quadrature_config quadrature;
  uint64_t seed;
  int64_t urn_replications;
  int bootstrap_resamples;
} dft_suite_config;

DFT_API void dft_suite_config_default(dft_suite_config* out);

/* Runs criterion `id` (1-based), or every criterion when id is 0. The JSON
   report goes to *json; *all_passed is 1 iff every check passed. */
DFT_API dft_status dft_verify(const dft_suite_config* cfg, int id, char** json, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif
