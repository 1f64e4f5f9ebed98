/* C interface to the macexp library.
 *
 * All functions return a macexp_status; on failure macexp_last_error()
 * describes the problem for the calling thread. Objects are opaque and are
 * released with the matching *_free function. Values are in nats; +/-inf
 * are IEEE infinities. Error types are 0 = user 1, 1 = user 2, 2 = both;
 * class pairs (i1, i2) are indexed 0 = (1,1), 1 = (1,2), 2 = (2,1), 3 = (2,2).
 */
#ifndef MACEXP_H
#define MACEXP_H

#include <stddef.h>

#if defined(_WIN32)
#define MACEXP_API __declspec(dllexport)
#else
#define MACEXP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum macexp_status {
  MACEXP_OK = 0,
  MACEXP_NEGATIVE_ENTRY = 1,
  MACEXP_ROW_SUM_MISMATCH = 2,
  MACEXP_ALPHABET_MISMATCH = 3,
  MACEXP_PARAMETER_OUT_OF_RANGE = 4,
  MACEXP_DEGENERATE_DISTRIBUTION = 5,
  MACEXP_NON_MONOTONE = 6,
  MACEXP_ALPHABET_TOO_LARGE = 7,
  MACEXP_DIMENSION_TOO_LARGE = 8,
  MACEXP_ALL_ZERO = 9,
  MACEXP_CONFIG_PARSE = 10,
  MACEXP_INVALID_ARGUMENT = 11,
  MACEXP_NULL_ARGUMENT = 12,
  MACEXP_INTERNAL = 13
} macexp_status;

typedef struct macexp_instance macexp_instance;
typedef struct macexp_report macexp_report;
typedef struct macexp_validation macexp_validation;

typedef struct macexp_options {
  double tol_rho;      /* golden-section width in rho */
  int rho_grid;        /* coarse grid seeding the rho maximization */
  double tol_gamma;    /* bisection width on thresholds */
  double tol_residual; /* difference treated as a root */
  double tol_monotone; /* allowed monotonicity violation */
  int outer_grid;      /* coarse grid over the user-1 threshold */
  int gamma_grid;      /* points per axis of the grid cross-check, 0 = off */
  int jobs;            /* worker threads */
} macexp_options;

MACEXP_API const char* macexp_last_error(void);
MACEXP_API const char* macexp_status_string(macexp_status status);
MACEXP_API void macexp_options_default(macexp_options* options);

/* Instances. */
MACEXP_API macexp_status macexp_instance_from_file(const char* path, macexp_instance** out);
MACEXP_API macexp_status macexp_instance_from_json(const char* text, macexp_instance** out);
/* source: n1*n2 row-major; channel: nx1*nx2*ny laid out [x1][x2][y];
 * bank: q11, q12 of length nx1 and q21, q22 of length nx2. */
MACEXP_API macexp_status macexp_instance_create(const double* source, size_t n1, size_t n2,
                                                const double* channel, size_t nx1, size_t nx2,
                                                size_t ny, const double* q11, const double* q12,
                                                const double* q21, const double* q22,
                                                macexp_instance** out);
MACEXP_API void macexp_instance_free(macexp_instance* instance);
/* Solver settings stored with the instance (from the config, else defaults). */
MACEXP_API macexp_status macexp_instance_options(const macexp_instance* instance,
                                                 macexp_options* out);
/* Input and output alphabet sizes: |U1|, |U2|, |X1|, |X2|, |Y|. */
MACEXP_API macexp_status macexp_instance_sizes(const macexp_instance* instance, size_t sizes[5]);

/* Scalar functions. w is nx*ny row-major. */
MACEXP_API macexp_status macexp_es(double rho, const double* p, size_t n, double* out);
MACEXP_API macexp_status macexp_e0(double rho, const double* q, const double* w, size_t nx,
                                   size_t ny, double* out);
MACEXP_API macexp_status macexp_es_tau(const macexp_instance* instance, double rho, int tau,
                                       double* out);
/* lambda may be NULL; otherwise receives the minimizing multipliers. */
MACEXP_API macexp_status macexp_es_corr(const macexp_instance* instance, double rho, double gamma1,
                                        double gamma2, int tau, int classes, double* out,
                                        double lambda[2]);
/* rho may be NULL; otherwise receives the maximizing rho (NaN when F is infinite). */
MACEXP_API macexp_status macexp_big_f(const macexp_instance* instance, const macexp_options* options,
                                      double gamma1, double gamma2, int tau, int classes,
                                      double* out, double* rho);

/* Exponents. options may be NULL for the instance's settings. */
MACEXP_API macexp_status macexp_iid_exponent(const macexp_instance* instance,
                                             const macexp_options* options, const double* q1,
                                             const double* q2, double* out);
/* table: 12 values laid out [tau][classes]; iid: 4 column minima. Either may be NULL. */
MACEXP_API macexp_status macexp_lower_bound(const macexp_instance* instance,
                                            const macexp_options* options, double* value,
                                            int* classes, double table[12], double iid[4]);
MACEXP_API macexp_status macexp_assignment_search(const macexp_instance* instance,
                                                  const macexp_options* options,
                                                  macexp_report** out);

/* Reports. */
MACEXP_API void macexp_report_free(macexp_report* report);
MACEXP_API macexp_status macexp_report_exponent(const macexp_report* report, double* out);
MACEXP_API macexp_status macexp_report_gamma_star(const macexp_report* report, double out[2]);
MACEXP_API macexp_status macexp_report_residuals(const macexp_report* report, double out[2]);
/* 0 equalized, 1 bracket jump, 2 boundary at 0, 3 boundary at 1. */
MACEXP_API macexp_status macexp_report_threshold_kind(const macexp_report* report, int out[2]);
MACEXP_API macexp_status macexp_report_table_f(const macexp_report* report, int tau, int classes,
                                               double* value, double* rho);
MACEXP_API macexp_status macexp_report_table_fl(const macexp_report* report, int tau, int classes,
                                                double* out);
MACEXP_API macexp_status macexp_report_iid(const macexp_report* report, int classes, double* out);
MACEXP_API macexp_status macexp_report_lower_bound(const macexp_report* report, double* value,
                                                   int* classes);
/* Assignment index: bit 0 swaps user 1's distributions, bit 1 user 2's.
 * ties is a bit mask over assignment indices. */
MACEXP_API macexp_status macexp_report_assignment(const macexp_report* report, int* best,
                                                  double exponents[4], int* ties);
/* has_grid is 0 when the cross-check was not requested. */
MACEXP_API macexp_status macexp_report_grid_check(const macexp_report* report, int* has_grid,
                                                  double* max, double argmax[2], int* disagrees);
/* Caller releases the string with macexp_string_free. */
MACEXP_API macexp_status macexp_report_to_json(const macexp_report* report, char** out);
MACEXP_API void macexp_string_free(char* text);

/* Sweeps. Buffers are caller-allocated.
 * gamma: grid*grid rows of 7 values (gamma1, gamma2, f for the four class
 * pairs, min), gamma1-major.
 * rho: 3*grid rows of 7 values (tau, rho, es_tau, es_corr for the four
 * class pairs), tau-major. */
MACEXP_API macexp_status macexp_sweep_gamma(const macexp_instance* instance,
                                            const macexp_options* options, int grid, double* out);
MACEXP_API macexp_status macexp_sweep_rho(const macexp_instance* instance, double gamma1,
                                          double gamma2, int grid, double* out);
/* Row of the gamma sweep chosen by the documented tie rule. */
MACEXP_API macexp_status macexp_sweep_gamma_argmax(const double* rows, int grid, int* row);

/* Dual-form validation against the primal oracles. */
MACEXP_API macexp_status macexp_validate(const macexp_instance* instance, macexp_validation** out);
MACEXP_API void macexp_validation_free(macexp_validation* validation);
MACEXP_API macexp_status macexp_validation_count(const macexp_validation* validation, size_t* out);
/* name and worst stay valid until the validation object is freed. */
MACEXP_API macexp_status macexp_validation_check(const macexp_validation* validation, size_t index,
                                                 const char** name, int* samples, int* skipped,
                                                 double* max_discrepancy, double* tolerance,
                                                 int* passed, const char** worst);

#ifdef __cplusplus
}
#endif

#endif /* MACEXP_H */
