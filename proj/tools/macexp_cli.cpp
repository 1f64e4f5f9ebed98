// Command-line front end. Talks to the library only through macexp.h.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "macexp/macexp.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;

const char* const kTauNames[3] = {"user1", "user2", "both"};
const char* const kClassLabels[4] = {"1-1", "1-2", "2-1", "2-2"};
const char* const kPairLabels[4] = {"Q11+Q21", "Q11+Q22", "Q12+Q21", "Q12+Q22"};
const char* const kKindNames[4] = {"equalized", "bracket-jump", "boundary-0", "boundary-1"};

// Thrown with the exit code the failure maps to.
struct Failure {
  int code;
  std::string message;
};

bool is_input_error(macexp_status s) {
  switch (s) {
    case MACEXP_NEGATIVE_ENTRY:
    case MACEXP_ROW_SUM_MISMATCH:
    case MACEXP_ALPHABET_MISMATCH:
    case MACEXP_PARAMETER_OUT_OF_RANGE:
    case MACEXP_CONFIG_PARSE:
    case MACEXP_INVALID_ARGUMENT:
    case MACEXP_ALPHABET_TOO_LARGE:
    case MACEXP_DIMENSION_TOO_LARGE:
      return true;
    default:
      return false;
  }
}

void check(macexp_status s) {
  if (s == MACEXP_OK) return;
  throw Failure{is_input_error(s) ? kExitInputError : kExitCheckFailed,
                std::string(macexp_status_string(s)) + ": " + macexp_last_error()};
}

struct InstanceDeleter {
  void operator()(macexp_instance* p) const { macexp_instance_free(p); }
};
struct ReportDeleter {
  void operator()(macexp_report* p) const { macexp_report_free(p); }
};
struct ValidationDeleter {
  void operator()(macexp_validation* p) const { macexp_validation_free(p); }
};
using InstancePtr = std::unique_ptr<macexp_instance, InstanceDeleter>;

struct Settings {
  std::string config;
  std::string out;
  int grid = 0;
  double tol_exp = 0.0;
  double tol_gamma = 0.0;
  int jobs = 0;
  bool bits = false;
};

InstancePtr load(const Settings& s) {
  macexp_instance* raw = nullptr;
  check(macexp_instance_from_file(s.config.c_str(), &raw));
  return InstancePtr(raw);
}

macexp_options options_for(const macexp_instance* inst, const Settings& s) {
  macexp_options o;
  check(macexp_instance_options(inst, &o));
  if (s.tol_exp > 0) o.tol_rho = s.tol_exp;
  if (s.tol_gamma > 0) o.tol_gamma = s.tol_gamma;
  if (s.jobs > 0) {
    o.jobs = s.jobs;
  } else if (const char* env = std::getenv("MACEXP_JOBS")) {
    const int j = std::atoi(env);
    if (j < 1) throw Failure{kExitInputError, "MACEXP_JOBS must be a positive integer"};
    o.jobs = j;
  }
  return o;
}

// Exponent in the presentation unit.
std::string fmt(double v, bool bits) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  if (bits) v /= std::log(2.0);
  if (std::abs(v) < 5e-7) v = 0.0;  // no "-0.000000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fmt_plain(double v) { return fmt(v, false); }

std::filesystem::path out_dir(const Settings& s) {
  std::filesystem::path dir = s.out.empty() ? std::filesystem::path(".") : std::filesystem::path(s.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Failure{kExitInputError, "cannot create " + dir.string() + ": " + ec.message()};
  return dir;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw Failure{kExitInputError, "cannot write " + path.string()};
  std::cerr << "wrote " << path.string() << "\n";
}

int cmd_exponent(const Settings& s) {
  const InstancePtr inst = load(s);
  macexp_options o = options_for(inst.get(), s);
  if (s.grid > 0) o.gamma_grid = s.grid;
  macexp_report* raw = nullptr;
  check(macexp_assignment_search(inst.get(), &o, &raw));
  const std::unique_ptr<macexp_report, ReportDeleter> rep(raw);

  double e, gamma[2], res[2], lb;
  int kind[2], lb_classes, best, ties;
  double assign[4];
  check(macexp_report_exponent(rep.get(), &e));
  check(macexp_report_gamma_star(rep.get(), gamma));
  check(macexp_report_residuals(rep.get(), res));
  check(macexp_report_threshold_kind(rep.get(), kind));
  check(macexp_report_lower_bound(rep.get(), &lb, &lb_classes));
  check(macexp_report_assignment(rep.get(), &best, assign, &ties));

  const char* unit = s.bits ? "bits" : "nats";
  std::ostringstream os;
  os << "exponent (" << unit << "): " << fmt(e, s.bits) << "\n";
  os << "thresholds: " << fmt_plain(gamma[0]) << " " << fmt_plain(gamma[1]) << " (" << kKindNames[kind[0]]
     << ", " << kKindNames[kind[1]] << ")\n";
  char rbuf[64];
  std::snprintf(rbuf, sizeof rbuf, "%.3e %.3e", res[0], res[1]);
  os << "equalization residuals: " << rbuf << "\n";
  os << "assignment: " << best << " (swap user1 " << ((best & 1) ? "yes" : "no") << ", swap user2 "
     << ((best & 2) ? "yes" : "no") << ")";
  os << "; exponents by assignment:";
  for (double v : assign) os << " " << fmt(v, s.bits);
  os << "; ties:";
  for (int a = 0; a < 4; ++a)
    if (ties & (1 << a)) os << " " << a;
  os << "\n\n";

  os << "F at thresholds\n" << "error_type";
  for (const char* c : kClassLabels) os << "," << c;
  os << "\n";
  for (int t = 0; t < 3; ++t) {
    os << kTauNames[t];
    for (int c = 0; c < 4; ++c) {
      double v;
      check(macexp_report_table_f(rep.get(), t, c, &v, nullptr));
      os << "," << fmt(v, s.bits);
    }
    os << "\n";
  }
  os << "\nlower bound: " << fmt(lb, s.bits) << " at " << kPairLabels[lb_classes] << "\n";
  os << "i.i.d. exponents:";
  for (int c = 0; c < 4; ++c) {
    double v;
    check(macexp_report_iid(rep.get(), c, &v));
    os << " " << kPairLabels[c] << "=" << fmt(v, s.bits);
  }
  os << "\n";

  int has_grid = 0, disagrees = 0;
  double gmax = 0, gargmax[2] = {0, 0};
  check(macexp_report_grid_check(rep.get(), &has_grid, &gmax, gargmax, &disagrees));
  if (has_grid) {
    os << "grid check: max " << fmt(gmax, s.bits) << " at " << fmt_plain(gargmax[0]) << " "
       << fmt_plain(gargmax[1]) << (disagrees ? " (DISAGREES with the threshold solver)" : " (agrees)")
       << "\n";
  }
  std::cout << os.str();

  if (!s.out.empty()) {
    char* json = nullptr;
    check(macexp_report_to_json(rep.get(), &json));
    const std::string text = std::string(json) + "\n";
    macexp_string_free(json);
    write_file(out_dir(s) / "report.json", text);
  }
  return has_grid && disagrees ? kExitCheckFailed : kExitOk;
}

int cmd_tables(const Settings& s) {
  const InstancePtr inst = load(s);
  macexp_options o = options_for(inst.get(), s);
  macexp_report* raw = nullptr;
  check(macexp_assignment_search(inst.get(), &o, &raw));
  const std::unique_ptr<macexp_report, ReportDeleter> rep(raw);

  std::ostringstream t1, t2;
  t1 << "error_type";
  for (const char* c : kClassLabels) t1 << "," << c;
  t1 << "\n";
  t2 << "error_type";
  for (const char* c : kPairLabels) t2 << "," << c;
  t2 << "\n";
  for (int t = 0; t < 3; ++t) {
    t1 << kTauNames[t];
    t2 << kTauNames[t];
    for (int c = 0; c < 4; ++c) {
      double f, fl;
      check(macexp_report_table_f(rep.get(), t, c, &f, nullptr));
      check(macexp_report_table_fl(rep.get(), t, c, &fl));
      t1 << "," << fmt(f, s.bits);
      t2 << "," << fmt(fl, s.bits);
    }
    t1 << "\n";
    t2 << "\n";
  }
  const auto dir = out_dir(s);
  write_file(dir / "tableI.csv", t1.str());
  write_file(dir / "tableII.csv", t2.str());
  return kExitOk;
}

int cmd_sweep(const Settings& s, const std::string& mode, const std::vector<double>& gamma) {
  const InstancePtr inst = load(s);
  const int grid = s.grid > 0 ? s.grid : 101;
  std::ostringstream os;
  if (mode == "gamma") {
    macexp_options o = options_for(inst.get(), s);
    std::vector<double> rows(static_cast<std::size_t>(grid) * grid * 7);
    check(macexp_sweep_gamma(inst.get(), &o, grid, rows.data()));
    os << "gamma1,gamma2";
    for (const char* c : kClassLabels) os << ",f_" << c;
    os << ",min_f\n";
    for (std::size_t i = 0; i < rows.size() / 7; ++i) {
      const double* r = &rows[7 * i];
      os << fmt_plain(r[0]) << "," << fmt_plain(r[1]);
      for (int k = 2; k < 7; ++k) os << "," << fmt(r[k], s.bits);
      os << "\n";
    }
    int best = 0;
    check(macexp_sweep_gamma_argmax(rows.data(), grid, &best));
    std::cerr << "surface max " << fmt(rows[7 * best + 6], s.bits) << " at " << fmt_plain(rows[7 * best])
              << " " << fmt_plain(rows[7 * best + 1]) << "\n";
  } else {
    if (gamma.size() != 2) throw Failure{kExitInputError, "--mode rho needs --gamma G1 G2"};
    std::vector<double> rows(3 * static_cast<std::size_t>(grid) * 7);
    check(macexp_sweep_rho(inst.get(), gamma[0], gamma[1], grid, rows.data()));
    os << "error_type,rho,es_tau";
    for (const char* c : kClassLabels) os << ",es_corr_" << c;
    os << "\n";
    for (std::size_t i = 0; i < rows.size() / 7; ++i) {
      const double* r = &rows[7 * i];
      os << kTauNames[static_cast<int>(r[0])] << "," << fmt_plain(r[1]);
      for (int k = 2; k < 7; ++k) os << "," << fmt(r[k], s.bits);
      os << "\n";
    }
  }
  if (s.out.empty())
    std::cout << os.str();
  else
    write_file(out_dir(s) / ("sweep_" + mode + ".csv"), os.str());
  return kExitOk;
}

int cmd_validate(const Settings& s) {
  const InstancePtr inst = load(s);
  macexp_validation* raw = nullptr;
  check(macexp_validate(inst.get(), &raw));
  const std::unique_ptr<macexp_validation, ValidationDeleter> val(raw);
  size_t n = 0;
  check(macexp_validation_count(val.get(), &n));
  bool all = true;
  for (size_t i = 0; i < n; ++i) {
    const char *name = nullptr, *worst = nullptr;
    int samples, skipped, passed;
    double maxd, tol;
    check(macexp_validation_check(val.get(), i, &name, &samples, &skipped, &maxd, &tol, &passed, &worst));
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-4s %-24s samples=%d skipped=%d max=%.3e tol=%.3e", passed ? "ok" : "FAIL",
                  name, samples, skipped, maxd, tol);
    std::cout << buf << "\n";
    if (!passed) {
      std::cout << "     worst: " << worst << "\n";
      all = false;
    }
  }
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-coding error exponents for correlated sources over a two-user MAC"};
  app.require_subcommand(1);
  Settings s;
  std::string mode = "gamma";
  std::vector<double> gamma;

  auto common = [&](CLI::App* sub) {
    sub->add_option("config", s.config, "JSON configuration file")->required();
    sub->add_option("--out", s.out, "Output directory");
    sub->add_option("--tol-exp", s.tol_exp, "Width of the rho search")->check(CLI::PositiveNumber);
    sub->add_option("--tol-gamma", s.tol_gamma, "Width of the threshold bisection")->check(CLI::PositiveNumber);
    sub->add_option("--jobs", s.jobs, "Worker threads (default: MACEXP_JOBS or 1)")->check(CLI::PositiveNumber);
    sub->add_flag("--bits", s.bits, "Print exponents in bits instead of nats");
  };
  auto* exponent = app.add_subcommand("exponent", "Optimized exponent, thresholds and diagnostics");
  common(exponent);
  exponent->add_option("--grid", s.grid, "Cross-check the thresholds on an N x N grid")->check(CLI::PositiveNumber);
  auto* tables = app.add_subcommand("tables", "Write tableI.csv and tableII.csv");
  common(tables);
  auto* sweep = app.add_subcommand("sweep", "Curves over rho or the threshold surface as CSV");
  common(sweep);
  sweep->add_option("--mode", mode, "rho or gamma")->check(CLI::IsMember({"rho", "gamma"}));
  sweep->add_option("--grid", s.grid, "Grid points per axis (default 101)")->check(CLI::Range(2, 100000));
  sweep->add_option("--gamma", gamma, "Thresholds for --mode rho")->expected(2);
  auto* validate = app.add_subcommand("validate", "Check dual formulas against primal oracles");
  common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (exponent->parsed()) return cmd_exponent(s);
    if (tables->parsed()) return cmd_tables(s);
    if (sweep->parsed()) return cmd_sweep(s, mode, gamma);
    return cmd_validate(s);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}
