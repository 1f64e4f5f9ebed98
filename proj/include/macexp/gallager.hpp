#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "macexp/model.hpp"
#include "macexp/types.hpp"

namespace macexp {

/// Single-input channel w[x][y'] with a possibly composite output alphabet.
/// Stored row-major: entry (x, y') sits at x * ny + y'.
struct PointToPointChannel {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> w;

  double operator()(std::size_t x, std::size_t y) const { return w[x * ny + y]; }
  std::span<const double> row(std::size_t x) const {
    return std::span<const double>(w).subspan(x * ny, ny);
  }
  static PointToPointChannel from_rows(const Matrix& rows);
  /// Largest |row sum - 1| over all inputs.
  double max_row_error() const;
};

/// Gallager source function (1+rho) log sum_u p(u)^{1/(1+rho)}, in nats.
double es(double rho, std::span<const double> p);

/// Gallager channel function -log sum_y (sum_x q(x) w(y|x)^{1/(1+rho)})^{1+rho}.
double e0(double rho, std::span<const double> q, const PointToPointChannel& ch);

/// Source function for error type tau:
/// log sum_{u_tc} (sum_{u_tau} P(u)^{1/(1+rho)})^{1+rho}. For Both the outer
/// sum has a single term, so this equals es() of the flattened joint law.
double es_tau(double rho, const JointSource& source, ErrorType tau);

/// Solution of the tilted-mean equation
///   sum p^{1/(1+rho)} log p / sum p^{1/(1+rho)} = log gamma.
/// The tilt t = 1/(1+rho) ranges over the whole real line, so rho may fall
/// below -1 (t < 0) or be +inf (t = 0). Outside [min p, max p] no tilt
/// solves the equation and one of the sentinels is returned instead.
struct RhoGamma {
  enum class Kind { Root, BelowMin, AboveMax };
  Kind kind;
  double rho;
  double tilt;
};

/// Throws Error(DegenerateDistribution) when p is a point mass and gamma != 1.
/// A distribution uniform on its support with gamma equal to its mass
/// returns rho = 0. gamma equal to the support minimum returns the limiting
/// tilt -inf (rho = -1).
RhoGamma rho_gamma(std::span<const double> p, double gamma);

/// Left-hand side of the tilted-mean equation at tilt t, over the support of p.
double tilted_mean_log(std::span<const double> p, double tilt);

/// Per-class source function of one user,
///   min_{lambda>=0} (1+rho) log sum_u p(u)^{1/(1+rho)} (p(u)/gamma)^{+-lambda/(1+rho)},
/// with exponent sign + for class 1 and - for class 2. Empty classes
/// (class 1 with gamma above max p, class 2 with gamma at most min p) give -inf.
/// lambda[0] of the result holds the minimizer.
ExponentValue es_class(double rho, std::span<const double> p, double gamma, MessageClass cls);

/// True when the message class of a user with marginal p is empty at gamma.
bool class_is_empty(std::span<const double> p, double gamma, MessageClass cls);

}  // namespace macexp
