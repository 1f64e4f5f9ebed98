#include "macexp/gallager.hpp"

#include <algorithm>
#include <cmath>

#include "macexp/optimize.hpp"

namespace macexp {

namespace {

// Objective values below this are treated as the -inf of an empty class.
constexpr double kNegInfFloor = -1e3;

double support_min(std::span<const double> p) {
  double m = kInf;
  for (double v : p)
    if (v > 0.0) m = std::min(m, v);
  return m;
}

double support_max(std::span<const double> p) { return *std::ranges::max_element(p); }

double log_sum_exp(std::span<const double> z) {
  double m = -kInf;
  for (double v : z) m = std::max(m, v);
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (double v : z) s += std::exp(v - m);
  return m + std::log(s);
}

}  // namespace

PointToPointChannel PointToPointChannel::from_rows(const Matrix& rows) {
  PointToPointChannel ch;
  ch.nx = rows.size();
  ch.ny = rows.empty() ? 0 : rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != ch.ny) throw Error(ErrorCode::AlphabetMismatch, "ragged channel matrix");
    ch.w.insert(ch.w.end(), r.begin(), r.end());
  }
  return ch;
}

double PointToPointChannel::max_row_error() const {
  double worst = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    double s = 0.0;
    for (double v : row(x)) s += v;
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

double es(double rho, std::span<const double> p) {
  const double s = 1.0 / (1.0 + rho);
  double sum = 0.0;
  for (double v : p)
    if (v > 0.0) sum += std::pow(v, s);
  return (1.0 + rho) * std::log(sum);
}

double e0(double rho, std::span<const double> q, const PointToPointChannel& ch) {
  if (q.size() != ch.nx) throw Error(ErrorCode::AlphabetMismatch, "input distribution does not match channel");
  const double s = 1.0 / (1.0 + rho);
  std::vector<double> inner(ch.ny, 0.0);
  for (std::size_t x = 0; x < ch.nx; ++x) {
    if (q[x] <= 0.0) continue;
    const auto r = ch.row(x);
    for (std::size_t y = 0; y < ch.ny; ++y)
      if (r[y] > 0.0) inner[y] += q[x] * std::pow(r[y], s);
  }
  double total = 0.0;
  for (double v : inner)
    if (v > 0.0) total += std::pow(v, 1.0 + rho);
  return -std::log(total);
}

double es_tau(double rho, const JointSource& source, ErrorType tau) {
  if (tau == ErrorType::Both) return es(rho, source.flat());
  const double s = 1.0 / (1.0 + rho);
  // Outer index runs over the complement user, inner over the erroneous one.
  const bool outer_is_u2 = tau == ErrorType::User1;
  const std::size_t n_out = outer_is_u2 ? source.size2() : source.size1();
  const std::size_t n_in = outer_is_u2 ? source.size1() : source.size2();
  double total = 0.0;
  for (std::size_t o = 0; o < n_out; ++o) {
    double inner = 0.0;
    for (std::size_t i = 0; i < n_in; ++i) {
      const double p = outer_is_u2 ? source(i, o) : source(o, i);
      if (p > 0.0) inner += std::pow(p, s);
    }
    if (inner > 0.0) total += std::pow(inner, 1.0 + rho);
  }
  return std::log(total);
}

double tilted_mean_log(std::span<const double> p, double tilt) {
  std::vector<double> z;
  std::vector<double> lp;
  for (double v : p) {
    if (v <= 0.0) continue;
    lp.push_back(std::log(v));
    z.push_back(tilt * lp.back());
  }
  const double lse = log_sum_exp(z);
  double mean = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) mean += std::exp(z[i] - lse) * lp[i];
  return mean;
}

RhoGamma rho_gamma(std::span<const double> p, double gamma) {
  const double lo_p = support_min(p), hi_p = support_max(p);
  if (hi_p >= 1.0) {
    if (gamma == 1.0) return {RhoGamma::Kind::Root, 0.0, 1.0};
    throw Error(ErrorCode::DegenerateDistribution, "point-mass distribution has no tilted root for gamma != 1");
  }
  if (gamma < lo_p) return {RhoGamma::Kind::BelowMin, -1.0, -kInf};
  if (gamma > hi_p) return {RhoGamma::Kind::AboveMax, -1.0, kInf};
  if (lo_p == hi_p) return {RhoGamma::Kind::Root, 0.0, 1.0};
  if (gamma == lo_p) return {RhoGamma::Kind::Root, -1.0, -kInf};
  if (gamma == hi_p) return {RhoGamma::Kind::Root, -1.0, kInf};

  const double target = std::log(gamma);
  // tilted_mean_log is nondecreasing in the tilt; widen until bracketed.
  double a = -1.0, b = 1.0;
  while (tilted_mean_log(p, a) > target && a > -1e9) a *= 2.0;
  while (tilted_mean_log(p, b) < target && b < 1e9) b *= 2.0;
  double t = 0.5 * (a + b);
  for (int it = 0; it < 400; ++it) {
    t = 0.5 * (a + b);
    const double r = tilted_mean_log(p, t) - target;
    if (std::abs(r) < 1e-13 || b - a < 1e-15 * std::max(1.0, std::abs(t))) break;
    (r < 0.0 ? a : b) = t;
  }
  const double rho = t == 0.0 ? kInf : 1.0 / t - 1.0;
  return {RhoGamma::Kind::Root, rho, t};
}

bool class_is_empty(std::span<const double> p, double gamma, MessageClass cls) {
  return cls == MessageClass::First ? gamma > support_max(p) : gamma <= support_min(p);
}

ExponentValue es_class(double rho, std::span<const double> p, double gamma, MessageClass cls) {
  if (class_is_empty(p, gamma, cls)) return ExponentValue::neg_inf();
  if (gamma <= 0.0) return {es(rho, p), rho, std::array<double, 2>{0.0, 0.0}};

  const double s = 1.0 / (1.0 + rho);
  const double sign = cls == MessageClass::First ? 1.0 : -1.0;
  const double log_gamma = std::log(gamma);
  std::vector<double> lp;
  for (double v : p)
    if (v > 0.0) lp.push_back(std::log(v));
  std::vector<double> z(lp.size());
  auto objective = [&](double lambda) {
    for (std::size_t i = 0; i < lp.size(); ++i)
      z[i] = s * lp[i] + sign * lambda * s * (lp[i] - log_gamma);
    return (1.0 + rho) * log_sum_exp(z);
  };
  const auto best = opt::minimize_half_line(objective, 1e-10, kNegInfFloor);
  if (best.unbounded) return ExponentValue::neg_inf();
  return {best.fx, rho, std::array<double, 2>{best.x, 0.0}};
}

}  // namespace macexp
