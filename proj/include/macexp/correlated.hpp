#pragma once

#include <array>
#include <vector>

#include "macexp/model.hpp"
#include "macexp/types.hpp"

namespace macexp {

/// Class-constrained source function of two correlated sources:
///
///   min_{l1,l2>=0} log sum_{u_tc} ( sum_{u_tau} P(u)^{1/(1+rho)}
///                    (P1(u1)/g1)^{-(-1)^{i1} l1/(1+rho)}
///                    (P2(u2)/g2)^{-(-1)^{i2} l2/(1+rho)} )^{1+rho}
///
/// Evaluating at many rho for a fixed (source, thresholds, tau, classes)
/// goes through this class, which caches the per-cell data and warm-starts
/// the multipliers from the previous solve.
class CorrelatedSourceExponent {
 public:
  CorrelatedSourceExponent(const JointSource& source, Thresholds gamma, ErrorType tau,
                           ClassPair classes, std::array<bool, 2> pinned = {false, false});

  /// True when a message class is empty, so every value is -inf.
  bool empty() const { return empty_; }

  ExponentValue evaluate(double rho);
  /// Dual objective at fixed multipliers (no minimization).
  double objective(double rho, std::array<double, 2> lambda) const;

 private:
  struct Cell {
    double log_p;
    std::array<double, 2> dir;  // signed log(P_nu(u_nu)/gamma_nu)
  };
  struct Derivs {
    double f;
    std::array<double, 2> g;
    std::array<std::array<double, 2>, 2> h;
  };
  Derivs derivatives(double rho, std::array<double, 2> lambda) const;

  std::vector<std::vector<Cell>> groups_;
  std::array<bool, 2> pinned_{};
  bool empty_ = false;
  std::array<double, 2> warm_{0.0, 0.0};
};

/// One-shot form of CorrelatedSourceExponent::evaluate. Result carries the
/// minimizing (lambda1, lambda2); -inf when either class is empty.
ExponentValue es_corr(double rho, const JointSource& source, Thresholds gamma, ErrorType tau,
                      ClassPair classes);

/// es_corr with only the constraint of `user` (0 or 1) kept; the other
/// multiplier is pinned to zero.
ExponentValue es_corr_single_active(double rho, const JointSource& source, double gamma, int user,
                                    MessageClass cls, ErrorType tau);

/// Dual objective of es_corr at fixed multipliers.
double es_corr_objective(double rho, const JointSource& source, Thresholds gamma, ErrorType tau,
                         ClassPair classes, std::array<double, 2> lambda);

/// Analytic emptiness test of the message class of `user`: class 1 is empty
/// for gamma above the largest marginal probability, class 2 for gamma at
/// or below the smallest positive one.
bool source_class_empty(const JointSource& source, int user, double gamma, MessageClass cls);

}  // namespace macexp
