#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "macexp/gallager.hpp"
#include "macexp/model.hpp"
#include "macexp/types.hpp"

// Brute-force and closed-form primal computations used to certify the dual
// formulas on small instances. Nothing here is tuned for speed.
namespace macexp::oracle {

/// Largest joint source alphabet the lattice accepts.
inline constexpr std::size_t kMaxSourceCells = 6;
/// Largest |X| * |Y| accepted by the channel primal.
inline constexpr std::size_t kMaxChannelCells = 64;
/// Largest lattice a SourceLattice will store.
inline constexpr std::size_t kMaxLatticePoints = 20'000'000;

/// All empirical joint laws with entries in grid_step * N on the support of
/// the source, with the per-point quantities the primal objective needs.
class SourceLattice {
 public:
  /// Throws AlphabetTooLarge when the source has more than kMaxSourceCells
  /// cells, ParameterOutOfRange when grid_step is outside [1e-3, 1] and
  /// DimensionTooLarge when the lattice would exceed kMaxLatticePoints.
  SourceLattice(const JointSource& source, double grid_step);

  /// min D(Phat||P) - rho H(Phat_{U_tau | U_tc}) over lattice points that
  /// fall in the message classes: sum Phat log p_nu >= log gamma_nu for
  /// class 1, < log gamma_nu for class 2. +inf when no point qualifies.
  double primal_min(double rho, ErrorType tau, Thresholds gamma, ClassPair classes) const;
  /// primal_min for every error type and every rho in one pass over the
  /// lattice, laid out [tau][rho index].
  std::array<std::vector<double>, 3> primal_min_table(std::span<const double> rhos, Thresholds gamma,
                                                      ClassPair classes) const;

  std::size_t size() const { return divergence_.size(); }
  double grid_step() const { return step_; }

 private:
  double step_;
  std::vector<double> divergence_;
  std::array<std::vector<double>, 3> entropy_;   // conditional entropy per error type
  std::array<std::vector<double>, 2> mean_log_;  // sum Phat log p_nu per user
};

/// One-shot form of SourceLattice::primal_min.
double primal_source_min(double rho, const JointSource& source, ErrorType tau, Thresholds gamma,
                         ClassPair classes, double grid_step);

/// D(Phat||qW) + rho D(Phat||q Phat_Y) for a joint law Phat over X x Y laid
/// out like the channel (x * ny + y). +inf when Phat charges a cell with q w = 0.
double channel_primal_objective(double rho, std::span<const double> q, const PointToPointChannel& ch,
                                std::span<const double> joint);

/// Minimizer of the channel primal in closed form:
/// Phat(x,y) proportional to q(x) w(y|x)^{1/(1+rho)} V(y)^{rho/(1+rho)} with
/// V proportional to e(y)^{1+rho}, e(y) = sum_x q(x) w(y|x)^{1/(1+rho)}.
std::vector<double> tilted_joint(double rho, std::span<const double> q, const PointToPointChannel& ch);

struct ChannelPrimal {
  /// Best value over every start, the closed-form one included.
  double value;
  /// Best value over the random starts alone.
  double random_value;
  std::vector<double> joint;
};

/// Minimizes channel_primal_objective by projected gradient descent on the
/// simplex over the support of q w, from `restarts` random starts (seeded)
/// and the closed-form start. Throws DimensionTooLarge past kMaxChannelCells.
ChannelPrimal primal_channel_min(double rho, std::span<const double> q, const PointToPointChannel& ch,
                                 int restarts, std::uint64_t seed = 1);

struct TiltedMax {
  double value;
  std::vector<double> v;
};

/// max over distributions V of sum_y e(y) V(y)^{rho/(1+rho)}: the value
/// (sum e^{1+rho})^{1/(1+rho)} at V proportional to e^{1+rho}. Throws
/// NegativeEntry for e < 0 and AllZero when e vanishes.
TiltedMax tilted_max(std::span<const double> e, double rho);

}  // namespace macexp::oracle
