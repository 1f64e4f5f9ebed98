#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "macexp/model.hpp"

namespace macexp {

struct ValidationOptions {
  /// Largest source lattice enumerated; the lattice step is the finest
  /// 1/N whose lattice fits.
  std::size_t max_lattice_points = 2'000'000;
  int channel_restarts = 4;
  std::uint64_t seed = 1;
};

struct CheckResult {
  std::string name;
  int samples = 0;
  int skipped = 0;
  double max_discrepancy = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  /// Human-readable description of the worst sample.
  std::string worst;
};

/// Lattice resolution error allowed between the dual source exponent and the
/// lattice primal: 2 * step * |log min P| over the support of P.
double lattice_slack(const JointSource& source, double grid_step);

/// Certifies the dual formulas of an instance against the primal oracles:
///   source-dual-vs-lattice  es_corr against the lattice primal, as a
///                           one-sided sandwich of width lattice_slack;
///   channel-dual-vs-descent e0 against projected-gradient descent on every
///                           support-reduced superchannel within 1e-4;
///   channel-closed-form     the primal objective at the closed-form joint
///                           law against e0 within 1e-8.
std::vector<CheckResult> validate_dual_forms(const Instance& instance, const ValidationOptions& opts = {});

}  // namespace macexp
