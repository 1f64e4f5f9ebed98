/* Exercises the shared library through its C header only. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "macexp/macexp.h"

static int failures = 0;

#define EXPECT(cond)                                                \
  do {                                                              \
    if (!(cond)) {                                                  \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                   \
    }                                                               \
  } while (0)

static const char* kSmall =
    "{\"source\": [[0.4, 0.1], [0.2, 0.3]],"
    " \"channel\": [[[0.9, 0.1], [0.6, 0.4]], [[0.3, 0.7], [0.05, 0.95]]],"
    " \"bank\": [[[0.5, 0.5], [0.9, 0.1]], [[0.5, 0.5], [0.2, 0.8]]],"
    " \"solver\": {\"outer_grid\": 11}}";

static void scalar_functions(void) {
  const double u[3] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  double v = 0.0;
  EXPECT(macexp_es(0.5, u, 3, &v) == MACEXP_OK);
  EXPECT(fabs(v - 0.5 * log(3.0)) < 1e-12);

  const double w[4] = {1, 0, 0, 1};
  const double q[2] = {0.5, 0.5};
  EXPECT(macexp_e0(1.0, q, w, 2, 2, &v) == MACEXP_OK);
  EXPECT(fabs(v - log(2.0)) < 1e-12);

  const double bad[2] = {0.5, -0.5};
  EXPECT(macexp_es(0.5, bad, 2, &v) == MACEXP_NEGATIVE_ENTRY);
  EXPECT(strlen(macexp_last_error()) > 0);
  EXPECT(macexp_es(0.5, NULL, 2, &v) == MACEXP_NULL_ARGUMENT);
  const double leaky[4] = {0.9, 0.0, 0.0, 1.0};
  EXPECT(macexp_e0(0.5, q, leaky, 2, 2, &v) == MACEXP_ROW_SUM_MISMATCH);
  EXPECT(strstr(macexp_last_error(), "w[0]") != NULL);
  EXPECT(macexp_e0(-0.5, q, w, 2, 2, &v) == MACEXP_PARAMETER_OUT_OF_RANGE);
  EXPECT(strcmp(macexp_status_string(MACEXP_OK), "ok") == 0);
}

static void instances(void) {
  macexp_instance* inst = NULL;
  EXPECT(macexp_instance_from_json("{", &inst) == MACEXP_CONFIG_PARSE);
  EXPECT(inst == NULL);
  EXPECT(macexp_instance_from_file("/nonexistent.json", &inst) != MACEXP_OK);

  const double src[4] = {0.6, 0.5, 0.0, 0.0};
  const double ch[2] = {1.0, 0.0};
  const double one[1] = {1.0};
  EXPECT(macexp_instance_create(src, 2, 2, ch, 1, 1, 2, one, one, one, one, &inst) ==
         MACEXP_ROW_SUM_MISMATCH);
  EXPECT(strstr(macexp_last_error(), "source") != NULL);

  const double good[4] = {0.25, 0.25, 0.25, 0.25};
  EXPECT(macexp_instance_create(good, 2, 2, ch, 1, 1, 2, one, one, one, one, &inst) == MACEXP_OK);
  size_t sizes[5];
  EXPECT(macexp_instance_sizes(inst, sizes) == MACEXP_OK);
  EXPECT(sizes[0] == 2 && sizes[1] == 2 && sizes[2] == 1 && sizes[4] == 2);
  double v = 0.0;
  EXPECT(macexp_es_tau(inst, 0.5, 0, &v) == MACEXP_OK);
  EXPECT(fabs(v - 0.5 * log(2.0)) < 1e-12);
  EXPECT(macexp_es_tau(inst, 0.5, 3, &v) == MACEXP_INVALID_ARGUMENT);
  macexp_instance_free(inst);
  macexp_instance_free(NULL);
}

static void exponents(void) {
  macexp_instance* inst = NULL;
  EXPECT(macexp_instance_from_json(kSmall, &inst) == MACEXP_OK);
  if (!inst) return;

  macexp_options opts;
  EXPECT(macexp_instance_options(inst, &opts) == MACEXP_OK);
  EXPECT(opts.outer_grid == 11);

  double v = 0.0, lambda[2] = {-1, -1};
  EXPECT(macexp_es_corr(inst, 0.5, 0.0, 0.0, 2, 0, &v, lambda) == MACEXP_OK);
  EXPECT(lambda[0] == 0.0 && lambda[1] == 0.0);
  EXPECT(macexp_es_corr(inst, 0.5, 1.0, 0.0, 2, 0, &v, NULL) == MACEXP_OK);
  EXPECT(isinf(v) && v < 0);
  double rho = 0.0;
  EXPECT(macexp_big_f(inst, NULL, 1.0, 0.0, 2, 0, &v, &rho) == MACEXP_OK);
  EXPECT(isinf(v) && v > 0 && isnan(rho));
  EXPECT(macexp_big_f(inst, NULL, 1.5, 0.0, 2, 0, &v, NULL) == MACEXP_PARAMETER_OUT_OF_RANGE);

  double lb = 0.0, table[12], iid[4];
  int classes = -1;
  EXPECT(macexp_lower_bound(inst, NULL, &lb, &classes, table, iid) == MACEXP_OK);
  EXPECT(classes >= 0 && classes < 4);
  EXPECT(iid[classes] == lb);

  macexp_report* report = NULL;
  opts.gamma_grid = 11;
  EXPECT(macexp_assignment_search(inst, &opts, &report) == MACEXP_OK);
  double e = 0.0, g[2], res[2];
  EXPECT(macexp_report_exponent(report, &e) == MACEXP_OK);
  EXPECT(e >= lb - 1e-6);
  EXPECT(macexp_report_gamma_star(report, g) == MACEXP_OK);
  EXPECT(g[0] >= 0 && g[0] <= 1 && g[1] >= 0 && g[1] <= 1);
  EXPECT(macexp_report_residuals(report, res) == MACEXP_OK);
  int best = -1, ties = 0, has_grid = 0, disagrees = -1;
  double ex[4], gmax = 0.0, garg[2];
  EXPECT(macexp_report_assignment(report, &best, ex, &ties) == MACEXP_OK);
  EXPECT(best >= 0 && best < 4 && ex[best] == e && (ties & (1 << best)));
  EXPECT(macexp_report_grid_check(report, &has_grid, &gmax, garg, &disagrees) == MACEXP_OK);
  EXPECT(has_grid == 1 && gmax <= e + 1e-6);
  EXPECT(macexp_report_table_f(report, 3, 0, &v, NULL) == MACEXP_INVALID_ARGUMENT);

  char* json = NULL;
  EXPECT(macexp_report_to_json(report, &json) == MACEXP_OK);
  EXPECT(json && strstr(json, "\"exponent\"") != NULL);
  macexp_string_free(json);
  macexp_report_free(report);

  double* rows = malloc(sizeof(double) * 9 * 7);
  EXPECT(macexp_sweep_gamma(inst, NULL, 3, rows) == MACEXP_OK);
  EXPECT(rows[0] == 0.0 && rows[8 * 7] == 1.0 && rows[8 * 7 + 1] == 1.0);
  int row = -1;
  EXPECT(macexp_sweep_gamma_argmax(rows, 3, &row) == MACEXP_OK);
  EXPECT(row >= 0 && row < 9);
  free(rows);

  rows = malloc(sizeof(double) * 3 * 5 * 7);
  EXPECT(macexp_sweep_rho(inst, 0.3, 0.3, 5, rows) == MACEXP_OK);
  EXPECT(rows[0] == 0.0 && rows[1] == 0.0 && rows[2] == 0.0);
  EXPECT(rows[14 * 7] == 2.0 && rows[14 * 7 + 1] == 1.0);
  free(rows);

  macexp_validation* val = NULL;
  EXPECT(macexp_validate(inst, &val) == MACEXP_OK);
  size_t n = 0;
  EXPECT(macexp_validation_count(val, &n) == MACEXP_OK);
  EXPECT(n == 3);
  for (size_t i = 0; i < n; ++i) {
    const char *name = NULL, *worst = NULL;
    int samples = 0, skipped = 0, passed = 0;
    double disc = 0.0, tol = 0.0;
    EXPECT(macexp_validation_check(val, i, &name, &samples, &skipped, &disc, &tol, &passed, &worst) ==
           MACEXP_OK);
    EXPECT(name != NULL && samples > 0 && passed == 1);
  }
  macexp_validation_free(val);
  macexp_instance_free(inst);
}

int main(void) {
  scalar_functions();
  instances();
  exponents();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  puts("capi: all checks passed");
  return 0;
}
