#include "macexp/correlated.hpp"

#include <algorithm>
#include <cmath>

#include "macexp/gallager.hpp"
#include "macexp/optimize.hpp"

namespace macexp {

namespace {
constexpr double kNegInfFloor = -1e3;
}

bool source_class_empty(const JointSource& source, int user, double gamma, MessageClass cls) {
  return class_is_empty(source.marginal(user), gamma, cls);
}

CorrelatedSourceExponent::CorrelatedSourceExponent(const JointSource& source, Thresholds gamma,
                                                   ErrorType tau, ClassPair classes,
                                                   std::array<bool, 2> pinned)
    : pinned_(pinned) {
  gamma.validate();
  std::array<double, 2> log_gamma{};
  for (int v = 0; v < 2; ++v) {
    if (pinned_[v]) continue;
    if (source_class_empty(source, v, gamma[v], classes[v])) empty_ = true;
    // gamma = 0 leaves class 1 unconstrained (class 2 is empty there).
    if (gamma[v] <= 0.0) pinned_[v] = true;
    else log_gamma[v] = std::log(gamma[v]);
  }
  if (empty_) return;

  const std::size_t n1 = source.size1(), n2 = source.size2();
  const auto lp1 = source.log_marginal(0), lp2 = source.log_marginal(1);
  auto make_cell = [&](std::size_t a, std::size_t b) {
    Cell c{source.log_prob(a, b), {0.0, 0.0}};
    const double sign1 = classes.user1 == MessageClass::First ? 1.0 : -1.0;
    const double sign2 = classes.user2 == MessageClass::First ? 1.0 : -1.0;
    if (!pinned_[0]) c.dir[0] = sign1 * (lp1[a] - log_gamma[0]);
    if (!pinned_[1]) c.dir[1] = sign2 * (lp2[b] - log_gamma[1]);
    return c;
  };
  // Groups are indexed by the complement user's symbol; cells with P = 0 drop out.
  switch (tau) {
    case ErrorType::Both:
      groups_.emplace_back();
      for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b)
          if (source(a, b) > 0.0) groups_.back().push_back(make_cell(a, b));
      break;
    case ErrorType::User1:
      for (std::size_t b = 0; b < n2; ++b) {
        groups_.emplace_back();
        for (std::size_t a = 0; a < n1; ++a)
          if (source(a, b) > 0.0) groups_.back().push_back(make_cell(a, b));
      }
      break;
    case ErrorType::User2:
      for (std::size_t a = 0; a < n1; ++a) {
        groups_.emplace_back();
        for (std::size_t b = 0; b < n2; ++b)
          if (source(a, b) > 0.0) groups_.back().push_back(make_cell(a, b));
      }
      break;
  }
  std::erase_if(groups_, [](const auto& g) { return g.empty(); });
}

// Two-level log-sum-exp: G_k = (1+rho) LSE_{c in k} z_c, L = LSE_k G_k, with
// z_c = s (log P_c + l . dir_c). Then grad G_k = E_k[dir], hess G_k = s Cov_k[dir],
// grad L = E[grad G], hess L = E[hess G] + Cov[grad G] under softmax(G).
CorrelatedSourceExponent::Derivs CorrelatedSourceExponent::derivatives(
    double rho, std::array<double, 2> lambda) const {
  const double s = 1.0 / (1.0 + rho);
  const std::size_t k = groups_.size();
  std::vector<double> big_g(k);
  std::vector<std::array<double, 2>> grad(k);
  std::vector<std::array<double, 3>> hess(k);  // xx, xy, yy
  std::vector<double> z;
  for (std::size_t gi = 0; gi < k; ++gi) {
    const auto& cells = groups_[gi];
    z.resize(cells.size());
    double m = -kInf;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      z[c] = s * (cells[c].log_p + lambda[0] * cells[c].dir[0] + lambda[1] * cells[c].dir[1]);
      m = std::max(m, z[c]);
    }
    double sum = 0.0, e0 = 0.0, e1 = 0.0, e00 = 0.0, e01 = 0.0, e11 = 0.0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const double w = std::exp(z[c] - m);
      const auto& d = cells[c].dir;
      sum += w;
      e0 += w * d[0];
      e1 += w * d[1];
      e00 += w * d[0] * d[0];
      e01 += w * d[0] * d[1];
      e11 += w * d[1] * d[1];
    }
    e0 /= sum, e1 /= sum, e00 /= sum, e01 /= sum, e11 /= sum;
    big_g[gi] = (1.0 + rho) * (m + std::log(sum));
    grad[gi] = {e0, e1};
    hess[gi] = {s * std::max(e00 - e0 * e0, 0.0), s * (e01 - e0 * e1), s * std::max(e11 - e1 * e1, 0.0)};
  }
  const double m = *std::ranges::max_element(big_g);
  double sum = 0.0;
  for (double v : big_g) sum += std::exp(v - m);
  Derivs out{m + std::log(sum), {0.0, 0.0}, {}};
  double hxx = 0.0, hxy = 0.0, hyy = 0.0;
  for (std::size_t gi = 0; gi < k; ++gi) {
    const double w = std::exp(big_g[gi] - m) / sum;
    out.g[0] += w * grad[gi][0];
    out.g[1] += w * grad[gi][1];
    hxx += w * (hess[gi][0] + grad[gi][0] * grad[gi][0]);
    hxy += w * (hess[gi][1] + grad[gi][0] * grad[gi][1]);
    hyy += w * (hess[gi][2] + grad[gi][1] * grad[gi][1]);
  }
  hxx -= out.g[0] * out.g[0];
  hxy -= out.g[0] * out.g[1];
  hyy -= out.g[1] * out.g[1];
  out.h = {{{std::max(hxx, 0.0), hxy}, {hxy, std::max(hyy, 0.0)}}};
  return out;
}

double CorrelatedSourceExponent::objective(double rho, std::array<double, 2> lambda) const {
  if (empty_) return -kInf;
  return derivatives(rho, lambda).f;
}

ExponentValue CorrelatedSourceExponent::evaluate(double rho) {
  if (empty_) return ExponentValue::neg_inf();
  auto fn = [&](std::array<double, 2> l) {
    const auto d = derivatives(rho, l);
    return opt::Quadratic2{d.f, d.g, d.h};
  };
  auto r = opt::minimize_orthant_newton(fn, warm_, pinned_, kNegInfFloor);
  if (r.unbounded) {
    warm_ = {0.0, 0.0};
    return ExponentValue::neg_inf();
  }
  warm_ = r.x;
  return {r.fx, rho, r.x};
}

ExponentValue es_corr(double rho, const JointSource& source, Thresholds gamma, ErrorType tau,
                      ClassPair classes) {
  return CorrelatedSourceExponent(source, gamma, tau, classes).evaluate(rho);
}

ExponentValue es_corr_single_active(double rho, const JointSource& source, double gamma, int user,
                                    MessageClass cls, ErrorType tau) {
  Thresholds g{0.0, 0.0};
  ClassPair c{MessageClass::First, MessageClass::First};
  std::array<bool, 2> pinned{true, true};
  (user == 0 ? g.gamma1 : g.gamma2) = gamma;
  (user == 0 ? c.user1 : c.user2) = cls;
  pinned[user] = false;
  return CorrelatedSourceExponent(source, g, tau, c, pinned).evaluate(rho);
}

double es_corr_objective(double rho, const JointSource& source, Thresholds gamma, ErrorType tau,
                         ClassPair classes, std::array<double, 2> lambda) {
  return CorrelatedSourceExponent(source, gamma, tau, classes).objective(rho, lambda);
}

}  // namespace macexp
