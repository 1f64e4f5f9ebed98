#include "macexp/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "macexp/gallager.hpp"
#include "macexp/optimize.hpp"
#include "parallel.hpp"

namespace macexp {

double extended_difference(double a, double b) {
  if (a == b) return 0.0;
  return a - b;
}

const char* to_string(ThresholdKind k) {
  switch (k) {
    case ThresholdKind::Equalized: return "equalized";
    case ThresholdKind::BracketJump: return "bracket-jump";
    case ThresholdKind::BoundaryZero: return "boundary-0";
    case ThresholdKind::BoundaryOne: return "boundary-1";
  }
  return "?";
}

namespace {

// Channel function with log-weights cached, on a support-reduced superchannel.
class ChannelTerm {
 public:
  ChannelTerm() = default;
  explicit ChannelTerm(const SuperChannel& full) : sc_(reduce_to_support(full)) {
    for (double v : sc_.ch.w) log_w_.push_back(v > 0.0 ? std::log(v) : -kInf);
  }

  double operator()(double rho) const {
    const double s = 1.0 / (1.0 + rho);
    const std::size_t nx = sc_.ch.nx, ny = sc_.ch.ny;
    double total = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      double inner = 0.0;
      for (std::size_t x = 0; x < nx; ++x) {
        const double lw = log_w_[x * ny + y];
        if (lw > -kInf) inner += sc_.q[x] * std::exp(s * lw);
      }
      if (inner > 0.0) total += std::exp((1.0 + rho) * std::log(inner));
    }
    return -std::log(total);
  }

 private:
  SuperChannel sc_;
  std::vector<double> log_w_;
};

class Evaluator {
 public:
  Evaluator(const Instance& instance, const SolverOptions& opts) : instance_(instance), opts_(opts) {
    for (ErrorType tau : kErrorTypes)
      for (ClassPair c : kClassPairs)
        channels_[static_cast<int>(tau)][index_of(c)] =
            ChannelTerm(superchannel(tau, instance.channel, instance.bank, c));
  }

  const ChannelTerm& channel(ErrorType tau, ClassPair c) const {
    return channels_[static_cast<int>(tau)][index_of(c)];
  }

  ExponentValue big_f(ErrorType tau, ClassPair c, Thresholds g) const {
    CorrelatedSourceExponent source(instance_.source, g, tau, c);
    if (source.empty()) return ExponentValue::pos_inf();
    const ChannelTerm& e0_term = channel(tau, c);
    auto objective = [&](double rho) {
      const ExponentValue s = source.evaluate(rho);
      return s.is_neg_inf() ? kInf : e0_term(rho) - s.value;
    };
    const auto best = opt::maximize_unit_interval(objective, opts_.rho_grid, opts_.tol_rho);
    if (best.fx == kInf) return ExponentValue::pos_inf();
    const ExponentValue at_best = source.evaluate(best.x);
    return {best.fx, best.x, at_best.lambda};
  }

  double big_f_lower(ErrorType tau, ClassPair c) const {
    const ChannelTerm& e0_term = channel(tau, c);
    auto objective = [&](double rho) { return e0_term(rho) - es_tau(rho, instance_.source, tau); };
    return opt::maximize_unit_interval(objective, opts_.rho_grid, opts_.tol_rho).fx;
  }

  SmallF small_f(ClassPair c, Thresholds g) const {
    SmallF out{ExponentValue::pos_inf(), ErrorType::User1, {}};
    bool first = true;
    for (ErrorType tau : kErrorTypes) {
      auto v = big_f(tau, c, g);
      out.per_tau[static_cast<int>(tau)] = v;
      if (first || v.value < out.value.value) {
        out.value = v;
        out.tau = tau;
        first = false;
      }
    }
    return out;
  }

  std::array<SmallF, 4> all_f(Thresholds g) const {
    std::array<SmallF, 4> out;
    for (ClassPair c : kClassPairs) out[index_of(c)] = small_f(c, g);
    return out;
  }

 private:
  const Instance& instance_;
  SolverOptions opts_;
  std::array<std::array<ChannelTerm, 4>, 3> channels_;
};

struct GammaPoint {
  Thresholds gamma;
  std::array<SmallF, 4> f;
  // How gamma2 was settled when this point came out of the inner solve.
  ThresholdKind inner_kind = ThresholdKind::Equalized;

  double at(int i1, int i2) const { return f[2 * i1 + i2].value.value; }
  // k_i(gamma2) = min_{i1} f_{i1,i}, and the analogous form for user 1.
  double min_over_user1(int i2) const { return std::min(at(0, i2), at(1, i2)); }
  double min_over_user2(int i1) const { return std::min(at(i1, 0), at(i1, 1)); }
  double diff_user1() const { return extended_difference(min_over_user2(0), min_over_user2(1)); }
  double diff_user2() const { return extended_difference(min_over_user1(0), min_over_user1(1)); }
  double objective() const { return std::min(min_over_user2(0), min_over_user2(1)); }
};

struct Settled {
  GammaPoint point;
  ThresholdKind kind;
};

// Maximizes min(k1, k2) over one threshold in [0,1], where the difference
// d = k1 - k2 is nondecreasing: bisection on the sign of d, with the
// boundary rule when d keeps one sign.
template <class Eval, class Diff>
Settled settle(Eval&& eval, Diff&& diff, const SolverOptions& opts, bool check_monotone,
               const char* label) {
  GammaPoint lo = eval(0.0);
  double d_lo = diff(lo);
  if (d_lo > 0.0) return {lo, ThresholdKind::BoundaryZero};
  GammaPoint hi = eval(1.0);
  double d_hi = diff(hi);
  if (d_hi < 0.0) return {hi, ThresholdKind::BoundaryOne};
  if (d_lo == 0.0) return {lo, ThresholdKind::Equalized};
  if (d_hi == 0.0) return {hi, ThresholdKind::Equalized};

  double x_lo = 0.0, x_hi = 1.0;
  while (x_hi - x_lo > opts.tol_gamma) {
    const double x = 0.5 * (x_lo + x_hi);
    GammaPoint mid = eval(x);
    const double d = diff(mid);
    if (check_monotone && (d < d_lo - opts.tol_monotone || d > d_hi + opts.tol_monotone)) {
      std::ostringstream msg;
      msg.precision(10);
      msg << label << " difference is not monotone near " << x << ": " << d_lo << " <= " << d
          << " <= " << d_hi << " fails";
      throw Error(ErrorCode::NonMonotoneDetected, msg.str());
    }
    if (std::abs(d) <= opts.tol_residual) return {mid, ThresholdKind::Equalized};
    if (d < 0.0) {
      lo = std::move(mid), d_lo = d, x_lo = x;
    } else {
      hi = std::move(mid), d_hi = d, x_hi = x;
    }
  }
  const bool take_lo = lo.objective() >= hi.objective();
  const GammaPoint& best = take_lo ? lo : hi;
  const double d_best = take_lo ? d_lo : d_hi;
  return {best, std::abs(d_best) < 1e-4 ? ThresholdKind::Equalized : ThresholdKind::BracketJump};
}

ExponentValue min_f(const std::array<SmallF, 4>& f) {
  ExponentValue best = f[0].value;
  for (const auto& v : f)
    if (v.value.value < best.value) best = v.value;
  return best;
}

}  // namespace

ExponentValue big_f(ErrorType tau, ClassPair classes, Thresholds gamma, const Instance& instance,
                    const SolverOptions& opts) {
  gamma.validate();
  return Evaluator(instance, opts).big_f(tau, classes, gamma);
}

SmallF small_f(ClassPair classes, Thresholds gamma, const Instance& instance, const SolverOptions& opts) {
  gamma.validate();
  return Evaluator(instance, opts).small_f(classes, gamma);
}

IidExponent iid_exponent(const Instance& instance, std::span<const double> q1, std::span<const double> q2,
                         const SolverOptions& opts) {
  BankData data;
  data[0] = {std::vector<double>(q1.begin(), q1.end()), std::vector<double>(q1.begin(), q1.end())};
  data[1] = {std::vector<double>(q2.begin(), q2.end()), std::vector<double>(q2.begin(), q2.end())};
  const Instance fixed = make_instance(instance.source.to_matrix(), instance.channel.to_tensor(), data);
  const Evaluator ev(fixed, opts);
  IidExponent out{ExponentValue::pos_inf(), ErrorType::User1, {}};
  for (ErrorType tau : kErrorTypes) {
    const double v = ev.big_f_lower(tau, kClassPairs[0]);
    out.per_tau[static_cast<int>(tau)] = {v, std::nullopt, std::nullopt};
    if (v < out.value.value) {
      out.value = {v, std::nullopt, std::nullopt};
      out.tau = tau;
    }
  }
  return out;
}

LowerBound lower_bound(const Instance& instance, const SolverOptions& opts) {
  const Evaluator ev(instance, opts);
  LowerBound out{-kInf, kClassPairs[0], {}, {}};
  for (ClassPair c : kClassPairs) {
    double column_min = kInf;
    for (ErrorType tau : kErrorTypes) {
      const double v = ev.big_f_lower(tau, c);
      out.table[static_cast<int>(tau)][index_of(c)] = v;
      column_min = std::min(column_min, v);
    }
    out.iid[index_of(c)] = column_min;
    if (column_min > out.value) {
      out.value = column_min;
      out.classes = c;
    }
  }
  return out;
}

ThresholdOptimum optimize_thresholds(const Instance& instance, const SolverOptions& opts) {
  const Evaluator ev(instance, opts);
  int evaluations = 0;
  auto eval = [&](double g1, double g2) {
    ++evaluations;
    const Thresholds g{g1, g2};
    return GammaPoint{g, ev.all_f(g)};
  };
  auto inner = [&](double g1) {
    auto s = settle([&](double g2) { return eval(g1, g2); },
                    [](const GammaPoint& p) { return p.diff_user2(); }, opts, true, "user-2 threshold");
    s.point.inner_kind = s.kind;
    return s.point;
  };
  // The user-1 difference evaluated along gamma2*(gamma1) need not be
  // monotone and can vanish on a whole interval, so the outer step maximizes
  // the inner optimum directly: coarse grid, then golden section around the
  // best grid point.
  std::map<double, GammaPoint> seen;
  auto outer = [&](double g1) -> const GammaPoint& {
    auto it = seen.find(g1);
    if (it == seen.end()) it = seen.emplace(g1, inner(g1)).first;
    return it->second;
  };
  const int n = std::max(opts.outer_grid, 3);
  int best_k = 0;
  for (int k = 0; k < n; ++k) {
    const double g1 = static_cast<double>(k) / (n - 1);
    if (outer(g1).objective() > outer(static_cast<double>(best_k) / (n - 1)).objective()) best_k = k;
  }
  const double a = static_cast<double>(std::max(best_k - 1, 0)) / (n - 1);
  const double b = static_cast<double>(std::min(best_k + 1, n - 1)) / (n - 1);
  opt::golden_section_max([&](double g1) { return outer(g1).objective(); }, a, b, opts.tol_gamma);
  // Every golden-section probe is cached; take the best one seen, smallest
  // gamma1 on ties.
  const GammaPoint* best = nullptr;
  for (const auto& [g1, p] : seen)
    if (!best || p.objective() > best->objective()) best = &p;
  const GammaPoint& at = *best;

  ThresholdOptimum out;
  out.gamma = at.gamma;
  out.f = at.f;
  out.exponent = min_f(out.f);
  out.residuals = {std::abs(at.diff_user1()), std::abs(at.diff_user2())};
  ThresholdKind outer_kind = ThresholdKind::BracketJump;
  if (out.residuals[0] < 1e-4)
    outer_kind = ThresholdKind::Equalized;
  else if (at.gamma.gamma1 == 0.0)
    outer_kind = ThresholdKind::BoundaryZero;
  else if (at.gamma.gamma1 == 1.0)
    outer_kind = ThresholdKind::BoundaryOne;
  out.kind = {outer_kind, at.inner_kind};
  out.evaluations = evaluations;
  return out;
}

std::vector<GammaGridPoint> sweep_gamma(const Instance& instance, int grid, const SolverOptions& opts) {
  if (grid < 2) throw Error(ErrorCode::InvalidArgument, "gamma grid needs at least 2 points per axis");
  const Evaluator ev(instance, opts);
  const auto n = static_cast<std::size_t>(grid);
  std::vector<GammaGridPoint> out(n * n);
  detail::parallel_for(n, opts.jobs, [&](std::size_t a) {
    for (std::size_t b = 0; b < n; ++b) {
      const Thresholds g{static_cast<double>(a) / (n - 1), static_cast<double>(b) / (n - 1)};
      const auto f = ev.all_f(g);
      GammaGridPoint& p = out[a * n + b];
      p.gamma = g;
      for (int k = 0; k < 4; ++k) p.f[k] = f[k].value.value;
      p.min_f = *std::ranges::min_element(p.f);
    }
  });
  return out;
}

double equalization_residual(const std::array<double, 4>& f) {
  const double d1 = extended_difference(std::min(f[0], f[1]), std::min(f[2], f[3]));
  const double d2 = extended_difference(std::min(f[0], f[2]), std::min(f[1], f[3]));
  return std::max(std::abs(d1), std::abs(d2));
}

const GammaGridPoint& grid_argmax(const std::vector<GammaGridPoint>& grid) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "empty threshold grid");
  const double top = std::ranges::max_element(grid, {}, &GammaGridPoint::min_f)->min_f;
  const GammaGridPoint* best = nullptr;
  double best_residual = kInf;
  for (const auto& p : grid) {
    if (std::abs(extended_difference(p.min_f, top)) > 1e-9) continue;
    const double r = equalization_residual(p.f);
    if (!best || r < best_residual) best = &p, best_residual = r;
  }
  return *best;
}

std::vector<RhoSweepRow> sweep_rho(const Instance& instance, Thresholds gamma, int grid) {
  gamma.validate();
  if (grid < 2) throw Error(ErrorCode::InvalidArgument, "rho grid needs at least 2 points");
  std::vector<RhoSweepRow> out;
  for (ErrorType tau : kErrorTypes) {
    std::vector<CorrelatedSourceExponent> curves;
    for (ClassPair c : kClassPairs) curves.emplace_back(instance.source, gamma, tau, c);
    for (int k = 0; k < grid; ++k) {
      const double rho = static_cast<double>(k) / (grid - 1);
      RhoSweepRow row{tau, rho, es_tau(rho, instance.source, tau), {}};
      for (int c = 0; c < 4; ++c) row.es_corr[c] = curves[c].evaluate(rho).value;
      out.push_back(row);
    }
  }
  return out;
}

ExponentReport assignment_search(const Instance& instance, const SolverOptions& opts) {
  std::array<ThresholdOptimum, 4> optima;
  SolverOptions serial = opts;
  serial.jobs = 1;
  detail::parallel_for(4, opts.jobs, [&](std::size_t a) {
    optima[a] = optimize_thresholds(instance.with_assignment(kAssignments[a]), serial);
  });

  ExponentReport r{};
  double best = -kInf;
  for (int a = 0; a < 4; ++a) {
    r.assignment_exponents[a] = optima[a].exponent.value;
    best = std::max(best, optima[a].exponent.value);
  }
  int winner = -1;
  for (int a = 0; a < 4; ++a) {
    if (std::abs(extended_difference(optima[a].exponent.value, best)) <= 1e-6) {
      if (winner < 0) winner = a;
      r.ties.push_back(kAssignments[a]);
    }
  }
  const ThresholdOptimum& w = optima[winner];
  r.best_assignment = kAssignments[winner];
  r.exponent = w.exponent;
  r.gamma_star = w.gamma;
  r.threshold_kind = w.kind;
  r.residuals = w.residuals;
  for (ClassPair c : kClassPairs)
    for (ErrorType tau : kErrorTypes)
      r.table_f[static_cast<int>(tau)][index_of(c)] = w.f[index_of(c)].per_tau[static_cast<int>(tau)];

  const Instance assigned = instance.with_assignment(r.best_assignment);
  const LowerBound lb = lower_bound(assigned, opts);
  r.table_fl = lb.table;
  r.iid = lb.iid;
  r.lower_bound = lb.value;
  r.lower_bound_classes = lb.classes;

  if (opts.gamma_grid > 0) {
    const auto grid = sweep_gamma(assigned, opts.gamma_grid, opts);
    const auto it = &grid_argmax(grid);
    r.grid_max = it->min_f;
    r.grid_argmax = it->gamma;
    r.grid_disagrees = std::abs(extended_difference(it->min_f, r.exponent.value)) > 1e-3;
  }
  return r;
}

}  // namespace macexp
