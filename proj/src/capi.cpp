#include "macexp/macexp.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "macexp/exponents.hpp"
#include "macexp/gallager.hpp"
#include "macexp/io.hpp"
#include "macexp/validation.hpp"

struct macexp_instance {
  macexp::Config config;
};

struct macexp_report {
  macexp::ExponentReport report;
};

struct macexp_validation {
  std::vector<macexp::CheckResult> checks;
};

namespace {

using namespace macexp;

thread_local std::string last_error;

macexp_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeEntry: return MACEXP_NEGATIVE_ENTRY;
    case ErrorCode::RowSumMismatch: return MACEXP_ROW_SUM_MISMATCH;
    case ErrorCode::AlphabetMismatch: return MACEXP_ALPHABET_MISMATCH;
    case ErrorCode::ParameterOutOfRange: return MACEXP_PARAMETER_OUT_OF_RANGE;
    case ErrorCode::DegenerateDistribution: return MACEXP_DEGENERATE_DISTRIBUTION;
    case ErrorCode::NonMonotoneDetected: return MACEXP_NON_MONOTONE;
    case ErrorCode::AlphabetTooLarge: return MACEXP_ALPHABET_TOO_LARGE;
    case ErrorCode::DimensionTooLarge: return MACEXP_DIMENSION_TOO_LARGE;
    case ErrorCode::AllZero: return MACEXP_ALL_ZERO;
    case ErrorCode::ConfigParse: return MACEXP_CONFIG_PARSE;
    case ErrorCode::InvalidArgument: return MACEXP_INVALID_ARGUMENT;
  }
  return MACEXP_INTERNAL;
}

// Runs fn, mapping exceptions to status codes and recording the message.
template <class Fn>
macexp_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return MACEXP_OK;
  } catch (const ValidationError& e) {
    last_error = e.what();
    for (const auto& v : e.violations()) last_error += "\n  " + v.where + ": " + v.message;
    return status_of(e.code());
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return MACEXP_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MACEXP_INTERNAL;
  }
}

template <class... Ptrs>
bool any_null(Ptrs... ptrs) {
  return ((ptrs == nullptr) || ...);
}

#define MACEXP_REQUIRE(...)                                          \
  do {                                                               \
    if (any_null(__VA_ARGS__)) {                                     \
      last_error = "required pointer argument is null";              \
      return MACEXP_NULL_ARGUMENT;                                   \
    }                                                                \
  } while (0)

ErrorType tau_of(int tau) {
  if (tau < 0 || tau > 2) throw Error(ErrorCode::InvalidArgument, "error type index must be 0, 1 or 2");
  return static_cast<ErrorType>(tau);
}

ClassPair classes_of(int c) {
  if (c < 0 || c > 3) throw Error(ErrorCode::InvalidArgument, "class pair index must be in 0..3");
  return kClassPairs[c];
}

SolverOptions options_of(const macexp_instance* inst, const macexp_options* o) {
  if (!o) return inst->config.solver;
  SolverOptions s;
  s.tol_rho = o->tol_rho;
  s.rho_grid = o->rho_grid;
  s.tol_gamma = o->tol_gamma;
  s.tol_residual = o->tol_residual;
  s.tol_monotone = o->tol_monotone;
  s.outer_grid = o->outer_grid;
  s.gamma_grid = o->gamma_grid;
  s.jobs = o->jobs;
  if (!(s.tol_rho > 0 && s.tol_gamma > 0 && s.tol_residual > 0 && s.tol_monotone >= 0) || s.rho_grid < 2 ||
      s.outer_grid < 3 || s.gamma_grid < 0 || s.jobs < 1)
    throw Error(ErrorCode::ParameterOutOfRange, "solver options out of range");
  return s;
}

void fill_options(const SolverOptions& s, macexp_options* o) {
  o->tol_rho = s.tol_rho;
  o->rho_grid = s.rho_grid;
  o->tol_gamma = s.tol_gamma;
  o->tol_residual = s.tol_residual;
  o->tol_monotone = s.tol_monotone;
  o->outer_grid = s.outer_grid;
  o->gamma_grid = s.gamma_grid;
  o->jobs = s.jobs;
}

int kind_code(ThresholdKind k) { return static_cast<int>(k); }

}  // namespace

extern "C" {

const char* macexp_last_error(void) { return last_error.c_str(); }

const char* macexp_status_string(macexp_status status) {
  switch (status) {
    case MACEXP_OK: return "ok";
    case MACEXP_NEGATIVE_ENTRY: return to_string(ErrorCode::NegativeEntry);
    case MACEXP_ROW_SUM_MISMATCH: return to_string(ErrorCode::RowSumMismatch);
    case MACEXP_ALPHABET_MISMATCH: return to_string(ErrorCode::AlphabetMismatch);
    case MACEXP_PARAMETER_OUT_OF_RANGE: return to_string(ErrorCode::ParameterOutOfRange);
    case MACEXP_DEGENERATE_DISTRIBUTION: return to_string(ErrorCode::DegenerateDistribution);
    case MACEXP_NON_MONOTONE: return to_string(ErrorCode::NonMonotoneDetected);
    case MACEXP_ALPHABET_TOO_LARGE: return to_string(ErrorCode::AlphabetTooLarge);
    case MACEXP_DIMENSION_TOO_LARGE: return to_string(ErrorCode::DimensionTooLarge);
    case MACEXP_ALL_ZERO: return to_string(ErrorCode::AllZero);
    case MACEXP_CONFIG_PARSE: return to_string(ErrorCode::ConfigParse);
    case MACEXP_INVALID_ARGUMENT: return to_string(ErrorCode::InvalidArgument);
    case MACEXP_NULL_ARGUMENT: return "NullArgument";
    case MACEXP_INTERNAL: return "Internal";
  }
  return "Unknown";
}

void macexp_options_default(macexp_options* options) {
  if (options) fill_options(SolverOptions{}, options);
}

macexp_status macexp_instance_from_file(const char* path, macexp_instance** out) {
  MACEXP_REQUIRE(path, out);
  *out = nullptr;
  return guarded([&] { *out = new macexp_instance{load_config(path)}; });
}

macexp_status macexp_instance_from_json(const char* text, macexp_instance** out) {
  MACEXP_REQUIRE(text, out);
  *out = nullptr;
  return guarded([&] { *out = new macexp_instance{parse_config(text)}; });
}

macexp_status macexp_instance_create(const double* source, size_t n1, size_t n2, const double* channel,
                                     size_t nx1, size_t nx2, size_t ny, const double* q11,
                                     const double* q12, const double* q21, const double* q22,
                                     macexp_instance** out) {
  MACEXP_REQUIRE(source, channel, q11, q12, q21, q22, out);
  *out = nullptr;
  return guarded([&] {
    Matrix p(n1, std::vector<double>(n2));
    for (size_t a = 0; a < n1; ++a)
      for (size_t b = 0; b < n2; ++b) p[a][b] = source[a * n2 + b];
    Tensor3 w(nx1, Matrix(nx2, std::vector<double>(ny)));
    for (size_t a = 0; a < nx1; ++a)
      for (size_t b = 0; b < nx2; ++b)
        for (size_t y = 0; y < ny; ++y) w[a][b][y] = channel[(a * nx2 + b) * ny + y];
    BankData bank;
    bank[0] = {std::vector<double>(q11, q11 + nx1), std::vector<double>(q12, q12 + nx1)};
    bank[1] = {std::vector<double>(q21, q21 + nx2), std::vector<double>(q22, q22 + nx2)};
    *out = new macexp_instance{Config{make_instance(p, w, bank), {}}};
  });
}

void macexp_instance_free(macexp_instance* instance) { delete instance; }

macexp_status macexp_instance_options(const macexp_instance* instance, macexp_options* out) {
  MACEXP_REQUIRE(instance, out);
  fill_options(instance->config.solver, out);
  return MACEXP_OK;
}

macexp_status macexp_instance_sizes(const macexp_instance* instance, size_t sizes[5]) {
  MACEXP_REQUIRE(instance, sizes);
  const Instance& in = instance->config.instance;
  sizes[0] = in.source.size1();
  sizes[1] = in.source.size2();
  sizes[2] = in.channel.size_x1();
  sizes[3] = in.channel.size_x2();
  sizes[4] = in.channel.size_y();
  return MACEXP_OK;
}

macexp_status macexp_es(double rho, const double* p, size_t n, double* out) {
  MACEXP_REQUIRE(p, out);
  return guarded([&] {
    if (!(rho >= 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "rho must be nonnegative");
    const std::span<const double> dist(p, n);
    require_distribution(dist, "p");
    *out = es(rho, dist);
  });
}

macexp_status macexp_e0(double rho, const double* q, const double* w, size_t nx, size_t ny, double* out) {
  MACEXP_REQUIRE(q, w, out);
  return guarded([&] {
    if (!(rho >= 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "rho must be nonnegative");
    if (nx == 0 || ny == 0) throw Error(ErrorCode::AlphabetMismatch, "channel needs at least one input and output");
    PointToPointChannel ch{nx, ny, std::vector<double>(w, w + nx * ny)};
    const std::span<const double> input(q, nx);
    require_distribution(input, "q");
    for (std::size_t x = 0; x < nx; ++x) require_distribution(ch.row(x), "w[" + std::to_string(x) + "]");
    *out = e0(rho, input, ch);
  });
}

macexp_status macexp_es_tau(const macexp_instance* instance, double rho, int tau, double* out) {
  MACEXP_REQUIRE(instance, out);
  return guarded([&] {
    if (!(rho >= 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "rho must be nonnegative");
    *out = es_tau(rho, instance->config.instance.source, tau_of(tau));
  });
}

macexp_status macexp_es_corr(const macexp_instance* instance, double rho, double gamma1, double gamma2,
                             int tau, int classes, double* out, double lambda[2]) {
  MACEXP_REQUIRE(instance, out);
  return guarded([&] {
    if (!(rho >= 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "rho must be nonnegative");
    const ExponentValue v =
        es_corr(rho, instance->config.instance.source, {gamma1, gamma2}, tau_of(tau), classes_of(classes));
    *out = v.value;
    if (lambda) {
      const auto l = v.lambda.value_or(std::array<double, 2>{std::nan(""), std::nan("")});
      lambda[0] = l[0];
      lambda[1] = l[1];
    }
  });
}

macexp_status macexp_big_f(const macexp_instance* instance, const macexp_options* options, double gamma1,
                           double gamma2, int tau, int classes, double* out, double* rho) {
  MACEXP_REQUIRE(instance, out);
  return guarded([&] {
    const ExponentValue v = big_f(tau_of(tau), classes_of(classes), {gamma1, gamma2},
                                  instance->config.instance, options_of(instance, options));
    *out = v.value;
    if (rho) *rho = v.rho.value_or(std::nan(""));
  });
}

macexp_status macexp_iid_exponent(const macexp_instance* instance, const macexp_options* options,
                                  const double* q1, const double* q2, double* out) {
  MACEXP_REQUIRE(instance, q1, q2, out);
  return guarded([&] {
    const Instance& in = instance->config.instance;
    *out = iid_exponent(in, std::span<const double>(q1, in.channel.size_x1()),
                        std::span<const double>(q2, in.channel.size_x2()), options_of(instance, options))
               .value.value;
  });
}

macexp_status macexp_lower_bound(const macexp_instance* instance, const macexp_options* options,
                                 double* value, int* classes, double table[12], double iid[4]) {
  MACEXP_REQUIRE(instance, value);
  return guarded([&] {
    const LowerBound lb = lower_bound(instance->config.instance, options_of(instance, options));
    *value = lb.value;
    if (classes) *classes = index_of(lb.classes);
    if (table)
      for (int t = 0; t < 3; ++t)
        for (int c = 0; c < 4; ++c) table[t * 4 + c] = lb.table[t][c];
    if (iid)
      for (int c = 0; c < 4; ++c) iid[c] = lb.iid[c];
  });
}

macexp_status macexp_assignment_search(const macexp_instance* instance, const macexp_options* options,
                                       macexp_report** out) {
  MACEXP_REQUIRE(instance, out);
  *out = nullptr;
  return guarded([&] {
    *out = new macexp_report{assignment_search(instance->config.instance, options_of(instance, options))};
  });
}

void macexp_report_free(macexp_report* report) { delete report; }

macexp_status macexp_report_exponent(const macexp_report* report, double* out) {
  MACEXP_REQUIRE(report, out);
  *out = report->report.exponent.value;
  return MACEXP_OK;
}

macexp_status macexp_report_gamma_star(const macexp_report* report, double out[2]) {
  MACEXP_REQUIRE(report, out);
  out[0] = report->report.gamma_star.gamma1;
  out[1] = report->report.gamma_star.gamma2;
  return MACEXP_OK;
}

macexp_status macexp_report_residuals(const macexp_report* report, double out[2]) {
  MACEXP_REQUIRE(report, out);
  out[0] = report->report.residuals[0];
  out[1] = report->report.residuals[1];
  return MACEXP_OK;
}

macexp_status macexp_report_threshold_kind(const macexp_report* report, int out[2]) {
  MACEXP_REQUIRE(report, out);
  out[0] = kind_code(report->report.threshold_kind[0]);
  out[1] = kind_code(report->report.threshold_kind[1]);
  return MACEXP_OK;
}

macexp_status macexp_report_table_f(const macexp_report* report, int tau, int classes, double* value,
                                    double* rho) {
  MACEXP_REQUIRE(report, value);
  return guarded([&] {
    const ExponentValue& v =
        report->report.table_f[static_cast<int>(tau_of(tau))][index_of(classes_of(classes))];
    *value = v.value;
    if (rho) *rho = v.rho.value_or(std::nan(""));
  });
}

macexp_status macexp_report_table_fl(const macexp_report* report, int tau, int classes, double* out) {
  MACEXP_REQUIRE(report, out);
  return guarded([&] {
    *out = report->report.table_fl[static_cast<int>(tau_of(tau))][index_of(classes_of(classes))];
  });
}

macexp_status macexp_report_iid(const macexp_report* report, int classes, double* out) {
  MACEXP_REQUIRE(report, out);
  return guarded([&] { *out = report->report.iid[index_of(classes_of(classes))]; });
}

macexp_status macexp_report_lower_bound(const macexp_report* report, double* value, int* classes) {
  MACEXP_REQUIRE(report, value);
  *value = report->report.lower_bound;
  if (classes) *classes = index_of(report->report.lower_bound_classes);
  return MACEXP_OK;
}

macexp_status macexp_report_assignment(const macexp_report* report, int* best, double exponents[4],
                                       int* ties) {
  MACEXP_REQUIRE(report, best);
  *best = report->report.best_assignment.index();
  if (exponents)
    for (int a = 0; a < 4; ++a) exponents[a] = report->report.assignment_exponents[a];
  if (ties) {
    *ties = 0;
    for (Assignment a : report->report.ties) *ties |= 1 << a.index();
  }
  return MACEXP_OK;
}

macexp_status macexp_report_grid_check(const macexp_report* report, int* has_grid, double* max,
                                       double argmax[2], int* disagrees) {
  MACEXP_REQUIRE(report, has_grid);
  const ExponentReport& r = report->report;
  *has_grid = r.grid_max.has_value();
  if (!r.grid_max) return MACEXP_OK;
  if (max) *max = *r.grid_max;
  if (argmax) {
    argmax[0] = r.grid_argmax->gamma1;
    argmax[1] = r.grid_argmax->gamma2;
  }
  if (disagrees) *disagrees = r.grid_disagrees;
  return MACEXP_OK;
}

macexp_status macexp_report_to_json(const macexp_report* report, char** out) {
  MACEXP_REQUIRE(report, out);
  *out = nullptr;
  return guarded([&] {
    const std::string text = report_to_json(report->report);
    char* buffer = new char[text.size() + 1];
    std::memcpy(buffer, text.c_str(), text.size() + 1);
    *out = buffer;
  });
}

void macexp_string_free(char* text) { delete[] text; }

macexp_status macexp_sweep_gamma(const macexp_instance* instance, const macexp_options* options, int grid,
                                 double* out) {
  MACEXP_REQUIRE(instance, out);
  return guarded([&] {
    const auto rows = sweep_gamma(instance->config.instance, grid, options_of(instance, options));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double* row = out + 7 * i;
      row[0] = rows[i].gamma.gamma1;
      row[1] = rows[i].gamma.gamma2;
      for (int c = 0; c < 4; ++c) row[2 + c] = rows[i].f[c];
      row[6] = rows[i].min_f;
    }
  });
}

macexp_status macexp_sweep_rho(const macexp_instance* instance, double gamma1, double gamma2, int grid,
                               double* out) {
  MACEXP_REQUIRE(instance, out);
  return guarded([&] {
    const auto rows = sweep_rho(instance->config.instance, {gamma1, gamma2}, grid);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double* row = out + 7 * i;
      row[0] = static_cast<int>(rows[i].tau);
      row[1] = rows[i].rho;
      row[2] = rows[i].es_tau;
      for (int c = 0; c < 4; ++c) row[3 + c] = rows[i].es_corr[c];
    }
  });
}

macexp_status macexp_sweep_gamma_argmax(const double* rows, int grid, int* row) {
  MACEXP_REQUIRE(rows, row);
  return guarded([&] {
    if (grid < 1) throw Error(ErrorCode::InvalidArgument, "grid must be positive");
    std::vector<GammaGridPoint> points(static_cast<std::size_t>(grid) * grid);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double* r = rows + 7 * i;
      points[i] = {{r[0], r[1]}, {r[2], r[3], r[4], r[5]}, r[6]};
    }
    *row = static_cast<int>(&grid_argmax(points) - points.data());
  });
}

macexp_status macexp_validate(const macexp_instance* instance, macexp_validation** out) {
  MACEXP_REQUIRE(instance, out);
  *out = nullptr;
  return guarded([&] { *out = new macexp_validation{validate_dual_forms(instance->config.instance)}; });
}

void macexp_validation_free(macexp_validation* validation) { delete validation; }

macexp_status macexp_validation_count(const macexp_validation* validation, size_t* out) {
  MACEXP_REQUIRE(validation, out);
  *out = validation->checks.size();
  return MACEXP_OK;
}

macexp_status macexp_validation_check(const macexp_validation* validation, size_t index, const char** name,
                                      int* samples, int* skipped, double* max_discrepancy,
                                      double* tolerance, int* passed, const char** worst) {
  MACEXP_REQUIRE(validation);
  if (index >= validation->checks.size()) {
    last_error = "check index out of range";
    return MACEXP_INVALID_ARGUMENT;
  }
  const CheckResult& c = validation->checks[index];
  if (name) *name = c.name.c_str();
  if (samples) *samples = c.samples;
  if (skipped) *skipped = c.skipped;
  if (max_discrepancy) *max_discrepancy = c.max_discrepancy;
  if (tolerance) *tolerance = c.tolerance;
  if (passed) *passed = c.passed;
  if (worst) *worst = c.worst.c_str();
  return MACEXP_OK;
}

}  // extern "C"
