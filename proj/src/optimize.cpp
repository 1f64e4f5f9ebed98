#include "macexp/optimize.hpp"

#include <algorithm>
#include <cmath>

namespace macexp::opt {

namespace {
constexpr double kInvPhi = 0.6180339887498949;  // (sqrt 5 - 1) / 2
}

ScalarOptimum golden_section_min(const std::function<double(double)>& f, double a, double b,
                                 double tol) {
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? ScalarOptimum{x1, f1} : ScalarOptimum{x2, f2};
}

ScalarOptimum golden_section_max(const std::function<double(double)>& f, double a, double b,
                                 double tol) {
  auto r = golden_section_min([&](double x) { return -f(x); }, a, b, tol);
  return {r.x, -r.fx};
}

ScalarOptimum maximize_unit_interval(const std::function<double(double)>& f, int grid_points,
                                     double tol) {
  const int n = std::max(grid_points, 3);
  ScalarOptimum best{0.0, f(0.0)};
  int best_k = 0;
  for (int k = 1; k < n; ++k) {
    const double x = static_cast<double>(k) / (n - 1);
    const double v = f(x);
    if (v > best.fx) {
      best = {x, v};
      best_k = k;
    }
  }
  const double lo = static_cast<double>(std::max(best_k - 1, 0)) / (n - 1);
  const double hi = static_cast<double>(std::min(best_k + 1, n - 1)) / (n - 1);
  auto refined = golden_section_max(f, lo, hi, tol);
  return refined.fx > best.fx ? refined : best;
}

HalfLineOptimum minimize_half_line(const std::function<double(double)>& f, double tol,
                                   double floor) {
  double len = 1.0;
  double f_len = f(len);
  for (double f_half = f(0.5); f_len < f_half; f_len = f(len)) {
    if (f_len < floor) return {len, f_len, true};
    f_half = f_len;
    len *= 2.0;
    if (len > 1e12) return {len, f(len), true};
  }
  auto r = golden_section_min(f, 0.0, len, tol);
  const double f0 = f(0.0);
  if (f0 <= r.fx) return {0.0, f0, false};
  return {r.x, r.fx, false};
}

OrthantOptimum minimize_orthant_newton(const std::function<Quadratic2(std::array<double, 2>)>& f,
                                       std::array<double, 2> start, std::array<bool, 2> pinned,
                                       double floor) {
  std::array<double, 2> x = start;
  for (int i = 0; i < 2; ++i)
    if (pinned[i] || !(x[i] > 0.0)) x[i] = 0.0;

  Quadratic2 q = f(x);
  int it = 0;
  for (; it < 200; ++it) {
    if (q.f < floor) return {x, q.f, true, it};

    std::array<bool, 2> free{};
    for (int i = 0; i < 2; ++i) free[i] = !pinned[i] && (x[i] > 0.0 || q.g[i] < 0.0);
    double pg = 0.0;
    for (int i = 0; i < 2; ++i)
      if (free[i]) pg = std::max(pg, std::abs(q.g[i]));
    if (pg < 1e-13) break;

    // Newton direction on the free coordinates, gradient step as fallback.
    std::array<double, 2> d{0.0, 0.0};
    if (free[0] && free[1]) {
      const double det = q.h[0][0] * q.h[1][1] - q.h[0][1] * q.h[1][0];
      if (det > 1e-14 * std::max(1.0, q.h[0][0] * q.h[1][1]) && q.h[0][0] > 0.0) {
        d[0] = -(q.h[1][1] * q.g[0] - q.h[0][1] * q.g[1]) / det;
        d[1] = -(q.h[0][0] * q.g[1] - q.h[1][0] * q.g[0]) / det;
      }
      if (d[0] * q.g[0] + d[1] * q.g[1] >= 0.0) {
        for (int i = 0; i < 2; ++i) d[i] = -q.g[i] / std::max(q.h[i][i], 1e-3);
      }
    } else {
      for (int i = 0; i < 2; ++i)
        if (free[i]) d[i] = -q.g[i] / std::max(q.h[i][i], 1e-8);
    }

    double t = 1.0;
    bool accepted = false;
    std::array<double, 2> xn{};
    Quadratic2 qn{};
    for (int ls = 0; ls < 80; ++ls, t *= 0.5) {
      for (int i = 0; i < 2; ++i) xn[i] = free[i] ? std::max(0.0, x[i] + t * d[i]) : x[i];
      qn = f(xn);
      const double decrease = q.g[0] * (xn[0] - x[0]) + q.g[1] * (xn[1] - x[1]);
      if (qn.f <= q.f + 1e-4 * decrease) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    const double step = std::max(std::abs(xn[0] - x[0]), std::abs(xn[1] - x[1]));
    const double gain = q.f - qn.f;
    x = xn;
    q = qn;
    if (gain <= 1e-16 * (1.0 + std::abs(q.f)) && step <= 1e-12 * (1.0 + x[0] + x[1])) break;
  }
  return {x, q.f, q.f < floor, it};
}

}  // namespace macexp::opt
