#pragma once

#include <array>
#include <functional>

namespace macexp::opt {

struct ScalarOptimum {
  double x;
  double fx;
};

/// Golden-section search for a minimum of a unimodal function on [a,b];
/// stops when the bracket is narrower than tol.
ScalarOptimum golden_section_min(const std::function<double(double)>& f, double a, double b,
                                 double tol);

ScalarOptimum golden_section_max(const std::function<double(double)>& f, double a, double b,
                                 double tol);

/// Maximum of a concave function on [0,1]: a coarse grid of grid_points
/// samples picks the bracket, golden-section refines it to tol.
ScalarOptimum maximize_unit_interval(const std::function<double(double)>& f, int grid_points,
                                     double tol);

/// Minimum over lambda >= 0 of a convex function of one variable. The
/// bracket [0, L] doubles from L = 1 until the objective increases at L, or
/// the objective drops below floor (then fx = floor-breaching value is
/// returned with x at the bracket end and unbounded = true).
struct HalfLineOptimum {
  double x;
  double fx;
  bool unbounded;
};
HalfLineOptimum minimize_half_line(const std::function<double(double)>& f, double tol,
                                   double floor);

/// Value, gradient and Hessian of a smooth function of two variables.
struct Quadratic2 {
  double f;
  std::array<double, 2> g;
  std::array<std::array<double, 2>, 2> h;
};

struct OrthantOptimum {
  std::array<double, 2> x;
  double fx;
  bool unbounded;
  int iterations;
};

/// Projected Newton for a smooth convex function on {x >= 0} in R^2.
/// Coordinates with pinned[i] set stay at zero. Stops on a vanishing
/// projected gradient or when the objective drops below floor.
OrthantOptimum minimize_orthant_newton(const std::function<Quadratic2(std::array<double, 2>)>& f,
                                       std::array<double, 2> start, std::array<bool, 2> pinned,
                                       double floor);

}  // namespace macexp::opt
