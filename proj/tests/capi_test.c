/* Licensed under the Apache License 2.0 (see LICENSE file). */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "definetti/definetti.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

#define EXPECT_OK(call) EXPECT((call) == DFT_OK)

static double cubic(double x, void* user) {
  (void)user;
  return 6.0 * x * (1.0 - x);
}

static double cubic_prime(double x, void* user) {
  (void)user;
  return 6.0 - 12.0 * x;
}

static void measures(void) {
  dft_quadrature_config cfg;
  dft_quadrature_config_default(&cfg);
  dft_measure* u = NULL;
  EXPECT_OK(dft_measure_beta(1.0, 1.0, &u));
  double v = 0.0;
  EXPECT_OK(dft_measure_cdf(u, 0.3, &v));
  EXPECT(fabs(v - 0.3) < 1e-15);
  EXPECT_OK(dft_measure_partial_mean(u, 0.0, 0.5, &v));
  EXPECT(fabs(v - 0.125) < 1e-15);
  double c1 = 0.0, c2 = 0.0, cab = 0.0;
  EXPECT_OK(dft_bound_constants(u, &cfg, 0, &c1, &c2, &cab));
  EXPECT(fabs(c1 - 1.0 / 6.0) < 1e-15);
  EXPECT(fabs(c2 - cab) == 0.0);

  char* json = NULL;
  EXPECT_OK(dft_measure_to_json(u, &json));
  EXPECT(json != NULL && strstr(json, "\"beta\"") != NULL);
  dft_string_free(json);
  dft_measure_free(u);

  dft_measure* bad = NULL;
  EXPECT(dft_measure_beta(-1.0, 1.0, &bad) == DFT_INVALID_ARGUMENT);
  EXPECT(bad == NULL);
  EXPECT(strlen(dft_last_error()) > 0);
  EXPECT(dft_measure_from_json("{oops", &bad) == DFT_PARSE_ERROR);
  EXPECT(dft_measure_beta(1.0, 1.0, NULL) == DFT_INVALID_ARGUMENT);

  dft_measure* spike = NULL;
  EXPECT_OK(dft_measure_power_spike(0.5, &spike));
  EXPECT(dft_bound_constants(spike, &cfg, 0, &c1, &c2, &cab) == DFT_DIVERGENT_INTEGRAL);
  dft_measure_free(spike);

  const double loc[] = {0.0, 0.5};
  const double mass[] = {0.25, 0.75};
  dft_measure* atoms = NULL;
  EXPECT_OK(dft_measure_atomic(loc, mass, 2, &atoms));
  dft_measure* interior = NULL;
  double q = 0.0;
  EXPECT_OK(dft_kill_boundary(atoms, &interior, &q));
  EXPECT(q == 0.25);
  EXPECT_OK(dft_measure_boundary_mass(interior, &v));
  EXPECT(v == 0.0);
  dft_measure_free(interior);
  dft_measure_free(atoms);

  dft_measure* smooth = NULL;
  EXPECT_OK(dft_measure_smooth(cubic, cubic_prime, NULL, 1.0, 1.0, NULL, &cfg, &smooth));
  double mean = 0.0, var = 0.0;
  EXPECT_OK(dft_measure_moments(smooth, &mean, &var, NULL));
  EXPECT(fabs(mean - 0.5) < 1e-12);
  EXPECT(fabs(var - 0.2) < 1e-12);
  double sample = 0.0;
  EXPECT(dft_sample_mixing(smooth, 1, 1, &sample) == DFT_INVALID_ARGUMENT);
  dft_measure_free(smooth);

  EXPECT_OK(dft_lemma_F(1.0, 1.0, 2.0, -1.0, &v));
  EXPECT(fabs(v - 0.5) < 1e-15);
}

static void distances(void) {
  dft_quadrature_config cfg;
  dft_quadrature_config_default(&cfg);
  dft_measure* u = NULL;
  EXPECT_OK(dft_measure_beta(1.0, 1.0, &u));
  dft_mean_law* law = NULL;
  EXPECT_OK(dft_mean_law_compute(u, 2, &cfg, 0, &law));
  EXPECT(dft_mean_law_n(law) == 2);
  double probs[3];
  EXPECT_OK(dft_mean_law_probs(law, probs, 3));
  EXPECT(fabs(probs[1] - 1.0 / 3.0) < 1e-15);
  EXPECT(dft_mean_law_probs(law, probs, 2) == DFT_INVALID_ARGUMENT);
  double dw = 0.0;
  EXPECT_OK(dft_dw_mean_vs_prior(law, u, &dw));
  EXPECT(fabs(dw - 5.0 / 36.0) < 1e-12);
  double psi = 0.0;
  EXPECT_OK(dft_dual_lower_bound_psi(law, u, &psi));
  EXPECT(fabs(psi - 1.0 / 12.0) < 1e-13);
  char* csv = NULL;
  EXPECT_OK(dft_mean_law_to_csv(law, &csv));
  EXPECT(strncmp(csv, "k,k_over_n,prob\n", 16) == 0);
  dft_string_free(csv);
  dft_mean_law_free(law);

  dft_distance_report report;
  EXPECT_OK(dft_distance_report_compute(u, 1, &cfg, DFT_MODE_EXACT, &report));
  EXPECT(fabs(report.dw_exact - 0.25) < 1e-14);
  EXPECT(isnan(report.dw_perturbed));
  EXPECT(isnan(report.dw_empirical));

  const int64_t ns[] = {5, 20};
  dft_distance_report rows[2];
  EXPECT_OK(dft_run_distance_curve(u, ns, 2, DFT_MODE_BOTH, &cfg, 0, 0, rows));
  EXPECT(rows[1].n == 20);
  EXPECT(!isnan(rows[1].dw_perturbed));
  EXPECT_OK(dft_reports_to_csv(rows, 2, &csv));
  const char* header = "n,dw_exact,dk,dw_perturbed,lower,upper_crude,upper_smooth,gap_bound,dual_psi\n";
  EXPECT(strncmp(csv, header, strlen(header)) == 0);
  dft_string_free(csv);
  dft_measure_free(u);

  const double loc[] = {0.5};
  const double mass[] = {1.0};
  dft_measure* dirac = NULL;
  EXPECT_OK(dft_measure_atomic(loc, mass, 1, &dirac));
  double d = 0.0;
  EXPECT_OK(dft_dw_perturbed_prior(dirac, 4, &cfg, &d));
  EXPECT(fabs(d - 1.0 / sqrt(8.0 * 3.14159265358979323846)) < 1e-12);
  dft_measure_free(dirac);

  double lhs = 0.0, rhs = 0.0;
  EXPECT_OK(dft_chen_bound_check(0.5, 16, &lhs, &rhs));
  EXPECT(lhs <= rhs);
  EXPECT(fabs(rhs - 0.25) < 1e-15);
  EXPECT(dft_chen_bound_check(1.5, 16, &lhs, &rhs) == DFT_INVALID_ARGUMENT);
}

static void monte_carlo(void) {
  dft_empirical_law* a = NULL;
  dft_empirical_law* b = NULL;
  EXPECT_OK(dft_simulate_urn(2, 3, 1, 20, 100000, 8, &a));
  EXPECT_OK(dft_simulate_urn(2, 3, 1, 20, 100000, 8, &b));
  int64_t ca[21], cb[21];
  EXPECT_OK(dft_empirical_law_counts(a, ca, 21));
  EXPECT_OK(dft_empirical_law_counts(b, cb, 21));
  EXPECT(memcmp(ca, cb, sizeof ca) == 0);
  EXPECT(dft_empirical_law_replications(a) == 100000);
  dft_measure* mu = NULL;
  EXPECT_OK(dft_measure_beta(2.0, 3.0, &mu));
  double dw = 0.0, se = 0.0;
  EXPECT_OK(dft_empirical_dw(a, mu, &dw));
  EXPECT_OK(dft_empirical_dw_standard_error(a, mu, 50, 9, &se));
  EXPECT(dw > 0.0 && se > 0.0);
  char* csv = NULL;
  EXPECT_OK(dft_empirical_law_to_csv(a, &csv));
  EXPECT(csv[0] == '#');
  dft_string_free(csv);
  dft_empirical_law_free(a);
  dft_empirical_law_free(b);
  dft_measure_free(mu);

  int64_t patterns[8];
  EXPECT_OK(dft_simulate_urn_patterns(1, 1, 1, 3, 1000, 1, patterns, 8));
  EXPECT(dft_simulate_urn(1, 1, 1, 1, 0, 1, &a) == DFT_INVALID_ARGUMENT);

  const double p[] = {0.5, 0.5};
  const double q[] = {1.0, 0.0};
  double tv = 0.0;
  EXPECT_OK(dft_total_variation(p, q, 2, &tv));
  EXPECT(tv == 0.5);
}

static void rates(void) {
  const int64_t ns[] = {10, 100, 1000, 10000};
  const double d[] = {0.5, 0.05, 0.005, 0.0005};
  double slope = 0.0, intercept = 0.0, residual = 1.0;
  EXPECT_OK(dft_fit_rate(ns, d, 4, &slope, &intercept, &residual));
  EXPECT(fabs(slope + 1.0) < 1e-12);
  EXPECT(dft_fit_rate(ns, d, 3, &slope, &intercept, &residual) == DFT_INVALID_ARGUMENT);

  int64_t grid[12];
  size_t written = 0;
  EXPECT_OK(dft_log_spaced_grid(100, 100000, 12, grid, &written));
  EXPECT(written == 12 && grid[0] == 100 && grid[11] == 100000);

  EXPECT(dft_criterion_count() == 10);
  EXPECT(strcmp(dft_criterion_name(1), "closed_form_exactness") == 0);
  EXPECT(dft_criterion_name(0) == NULL);

  dft_suite_config suite;
  dft_suite_config_default(&suite);
  char* json = NULL;
  int passed = 0;
  EXPECT_OK(dft_verify(&suite, 1, &json, &passed));
  EXPECT(passed == 1);
  EXPECT(strstr(json, "\"all_passed\": true") != NULL);
  dft_string_free(json);
}

int main(void) {
  EXPECT(strcmp(dft_status_string(DFT_OK), "ok") == 0);
  EXPECT(dft_version() != NULL);
  dft_set_worker_count(2);
  measures();
  distances();
  monte_carlo();
  rates();
  if (failures != 0) {
    fprintf(stderr, "%d C API checks failed\n", failures);
    return 1;
  }
  printf("C API checks passed\n");
  return 0;
}
