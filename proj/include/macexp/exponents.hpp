#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "macexp/channels.hpp"
#include "macexp/correlated.hpp"
#include "macexp/model.hpp"
#include "macexp/types.hpp"

namespace macexp {

struct SolverOptions {
  /// Golden-section bracket width for the maximization over rho in [0,1].
  double tol_rho = 1e-9;
  /// Coarse grid that seeds the rho maximization.
  int rho_grid = 33;
  /// Bisection width on each threshold.
  double tol_gamma = 1e-6;
  /// A difference function below this in magnitude counts as a root.
  double tol_residual = 1e-7;
  /// Allowed violation of monotonicity in the inner bisection.
  double tol_monotone = 1e-6;
  /// Coarse grid over the user-1 threshold that seeds its maximization.
  int outer_grid = 41;
  /// Points per axis of the threshold grid cross-check; 0 skips it.
  int gamma_grid = 0;
  int jobs = 1;
};

/// A per-(tau, i1, i2) table laid out [tau][index_of(classes)].
using ErrorTable = std::array<std::array<ExponentValue, 4>, 3>;

struct SmallF {
  ExponentValue value;
  ErrorType tau;  // minimizing error type
  std::array<ExponentValue, 3> per_tau;
};

/// F_{tau,i1,i2}(gamma) = max_{rho in [0,1]} E0(rho, superchannel) - Es_corr(rho);
/// +inf when a message class is empty.
ExponentValue big_f(ErrorType tau, ClassPair classes, Thresholds gamma, const Instance& instance,
                    const SolverOptions& opts = {});

/// f_{i1,i2}(gamma) = min over tau of big_f.
SmallF small_f(ClassPair classes, Thresholds gamma, const Instance& instance,
               const SolverOptions& opts = {});

/// Min over tau of max_rho E0(rho, Q_tau, W Q_tc) - Es_tau(rho) for one
/// fixed input distribution per user.
struct IidExponent {
  ExponentValue value;
  ErrorType tau;
  std::array<ExponentValue, 3> per_tau;
};
IidExponent iid_exponent(const Instance& instance, std::span<const double> q1,
                         std::span<const double> q2, const SolverOptions& opts = {});

/// Best i.i.d. exponent over the four (Q_{1,i1}, Q_{2,i2}) combinations.
struct LowerBound {
  double value;
  ClassPair classes;
  /// F^L laid out [tau][index_of(classes)], one row per error type.
  std::array<std::array<double, 4>, 3> table;
  /// Column minima: the i.i.d. exponent of each combination.
  std::array<double, 4> iid;
};
LowerBound lower_bound(const Instance& instance, const SolverOptions& opts = {});

/// How a threshold was settled.
enum class ThresholdKind { Equalized, BracketJump, BoundaryZero, BoundaryOne };
const char* to_string(ThresholdKind k);

struct ThresholdOptimum {
  Thresholds gamma;
  ExponentValue exponent;
  /// f_{i1,i2} at gamma, index_of order.
  std::array<SmallF, 4> f;
  /// |min_{i2} f_{1,i2} - min_{i2} f_{2,i2}| and |min_{i1} f_{i1,1} - min_{i1} f_{i1,2}|.
  std::array<double, 2> residuals;
  std::array<ThresholdKind, 2> kind;
  int evaluations = 0;
};

/// Maximizes min_{i1,i2} f over the thresholds. For each user-1 threshold the
/// user-2 threshold comes from bisection on its equalization condition (with
/// the boundary rule when the difference keeps one sign); the resulting
/// profile is maximized over the user-1 threshold by a coarse grid and golden
/// section. Throws Error(NonMonotoneDetected) when the inner difference breaks
/// monotonicity beyond opts.tol_monotone.
ThresholdOptimum optimize_thresholds(const Instance& instance, const SolverOptions& opts = {});

/// min_{i1,i2} f on a uniform grid x grid lattice over [0,1]^2, row-major in
/// gamma1. Rows are computed in parallel with opts.jobs workers.
struct GammaGridPoint {
  Thresholds gamma;
  std::array<double, 4> f;
  double min_f;
};
std::vector<GammaGridPoint> sweep_gamma(const Instance& instance, int grid,
                                        const SolverOptions& opts = {});

/// Grid point with the largest min_f. min_f is often flat along one threshold,
/// so points within 1e-9 of the maximum count as tied and the tie goes to the
/// point with the smallest equalization residual, then to the earliest row.
const GammaGridPoint& grid_argmax(const std::vector<GammaGridPoint>& grid);

/// max(|min_{i2} f_{1,i2} - min_{i2} f_{2,i2}|, |min_{i1} f_{i1,1} - min_{i1} f_{i1,2}|)
/// for f in index_of order.
double equalization_residual(const std::array<double, 4>& f);

/// Es_tau and the four Es_corr curves at the given thresholds over rho = k/(grid-1).
struct RhoSweepRow {
  ErrorType tau;
  double rho;
  double es_tau;
  std::array<double, 4> es_corr;
};
std::vector<RhoSweepRow> sweep_rho(const Instance& instance, Thresholds gamma, int grid);

struct ExponentReport {
  ExponentValue exponent;
  Thresholds gamma_star;
  std::array<ThresholdKind, 2> threshold_kind;
  std::array<double, 2> residuals;
  /// F at gamma_star, one row per error type.
  ErrorTable table_f;
  /// F^L for the winning assignment, one row per error type.
  std::array<std::array<double, 4>, 3> table_fl;
  /// i.i.d. exponent of each fixed (Q_{1,i1}, Q_{2,i2}) pair.
  std::array<double, 4> iid;
  double lower_bound;
  ClassPair lower_bound_classes;
  Assignment best_assignment;
  std::array<double, 4> assignment_exponents;
  /// Assignments whose exponent is within 1e-6 of the winner.
  std::vector<Assignment> ties;
  /// Grid cross-check, when requested.
  std::optional<double> grid_max;
  std::optional<Thresholds> grid_argmax;
  bool grid_disagrees = false;
};

/// Runs optimize_thresholds for each of the four assignments and reports the
/// best one; the lowest assignment index wins ties.
ExponentReport assignment_search(const Instance& instance, const SolverOptions& opts = {});

/// Difference a - b of extended reals with +inf - +inf taken as 0.
double extended_difference(double a, double b);

}  // namespace macexp
