#include "macexp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace macexp::oracle {
namespace {

struct LatticeSetup {
  std::vector<std::size_t> support;  // flat cell indices with P > 0
  int total = 0;                     // lattice points put total units of mass
  double points = 0.0;
};

LatticeSetup setup_lattice(const JointSource& source, double grid_step) {
  if (source.cells() > kMaxSourceCells)
    throw Error(ErrorCode::AlphabetTooLarge, "source lattice needs at most 6 joint cells, got " +
                                                 std::to_string(source.cells()));
  if (!(grid_step >= 1e-3 && grid_step <= 1.0))
    throw Error(ErrorCode::ParameterOutOfRange, "lattice step must lie in [1e-3, 1]");
  LatticeSetup s;
  const auto p = source.flat();
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) s.support.push_back(i);
  s.total = static_cast<int>(std::lround(1.0 / grid_step));
  // C(total + k - 1, k - 1) compositions of total into k = |support| parts.
  const std::size_t k = s.support.size();
  s.points = 1.0;
  for (std::size_t j = 1; j < k; ++j) s.points = s.points * (s.total + static_cast<double>(j)) / j;
  return s;
}

struct PointStats {
  double divergence;
  std::array<double, 3> entropy;
  std::array<double, 2> mean_log;
};

// Calls fn(stats) for every lattice point on the source support.
template <class Fn>
void visit_lattice(const JointSource& source, const LatticeSetup& s, Fn&& fn) {
  const std::size_t k = s.support.size();
  const std::size_t n2 = source.size2();
  const auto lp1 = source.log_marginal(0);
  const auto lp2 = source.log_marginal(1);
  std::vector<int> counts(k, 0);
  std::vector<double> m1(source.size1()), m2(n2);
  const double unit = 1.0 / s.total;

  auto emit = [&] {
    PointStats st{0.0, {}, {0.0, 0.0}};
    double joint_h = 0.0;
    std::fill(m1.begin(), m1.end(), 0.0);
    std::fill(m2.begin(), m2.end(), 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] == 0) continue;
      const double ph = counts[j] * unit;
      const std::size_t cell = s.support[j];
      const std::size_t u1 = cell / n2, u2 = cell % n2;
      const double lph = std::log(ph);
      st.divergence += ph * (lph - source.log_prob(u1, u2));
      joint_h -= ph * lph;
      m1[u1] += ph;
      m2[u2] += ph;
      st.mean_log[0] += ph * lp1[u1];
      st.mean_log[1] += ph * lp2[u2];
    }
    double h1 = 0.0, h2 = 0.0;
    for (double v : m1)
      if (v > 0.0) h1 -= v * std::log(v);
    for (double v : m2)
      if (v > 0.0) h2 -= v * std::log(v);
    st.entropy[static_cast<int>(ErrorType::User1)] = joint_h - h2;
    st.entropy[static_cast<int>(ErrorType::User2)] = joint_h - h1;
    st.entropy[static_cast<int>(ErrorType::Both)] = joint_h;
    fn(st);
  };

  // Odometer over compositions: counts[0..k-2] free, the last part takes the rest.
  auto rec = [&](auto&& self, std::size_t j, int left) -> void {
    if (j + 1 == k) {
      counts[j] = left;
      emit();
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[j] = c;
      self(self, j + 1, left - c);
    }
  };
  rec(rec, 0, s.total);
}

// Membership test for one user's message class. The boundary moves down by
// a few ulps of log gamma so that points whose mean lands on it up to
// rounding (a point mass on the least likely symbol, say) fall in class 1 as
// they do analytically.
struct ClassTest {
  double edge;
  bool first;
  ClassTest(double gamma, MessageClass cls) : first(cls == MessageClass::First) {
    const double lg = gamma > 0.0 ? std::log(gamma) : -kInf;
    edge = lg - 1e-12 * std::max(1.0, std::abs(lg));
  }
  bool operator()(double mean_log) const { return first ? mean_log >= edge : mean_log < edge; }
};

// Euclidean projection of v onto {x >= floor, sum x = 1}.
void project_simplex(std::vector<double>& v, double floor) {
  const std::size_t n = v.size();
  const double mass = 1.0 - floor * static_cast<double>(n);
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = v[i] - floor;
  std::vector<double> sorted = u;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cum += sorted[i];
    const double t = (cum - mass) / static_cast<double>(i + 1);
    if (sorted[i] - t > 0.0) theta = t;
  }
  for (std::size_t i = 0; i < n; ++i) v[i] = std::max(u[i] - theta, 0.0) + floor;
}

}  // namespace

SourceLattice::SourceLattice(const JointSource& source, double grid_step) : step_(grid_step) {
  const LatticeSetup s = setup_lattice(source, grid_step);
  if (s.points > static_cast<double>(kMaxLatticePoints))
    throw Error(ErrorCode::DimensionTooLarge, "source lattice too large to store; use a coarser step");
  const auto n = static_cast<std::size_t>(s.points);
  divergence_.reserve(n);
  for (auto& e : entropy_) e.reserve(n);
  for (auto& m : mean_log_) m.reserve(n);
  visit_lattice(source, s, [&](const PointStats& st) {
    divergence_.push_back(st.divergence);
    for (int t = 0; t < 3; ++t) entropy_[t].push_back(st.entropy[t]);
    for (int u = 0; u < 2; ++u) mean_log_[u].push_back(st.mean_log[u]);
  });
}

double SourceLattice::primal_min(double rho, ErrorType tau, Thresholds gamma, ClassPair classes) const {
  return primal_min_table({&rho, 1}, gamma, classes)[static_cast<int>(tau)][0];
}

std::array<std::vector<double>, 3> SourceLattice::primal_min_table(std::span<const double> rhos, Thresholds gamma,
                                                                   ClassPair classes) const {
  gamma.validate();
  const ClassTest in1(gamma.gamma1, classes.user1), in2(gamma.gamma2, classes.user2);
  std::array<std::vector<double>, 3> best;
  for (auto& b : best) b.assign(rhos.size(), kInf);
  for (std::size_t i = 0; i < divergence_.size(); ++i) {
    if (!in1(mean_log_[0][i]) || !in2(mean_log_[1][i])) continue;
    for (int t = 0; t < 3; ++t)
      for (std::size_t r = 0; r < rhos.size(); ++r)
        best[t][r] = std::min(best[t][r], divergence_[i] - rhos[r] * entropy_[t][i]);
  }
  return best;
}

double primal_source_min(double rho, const JointSource& source, ErrorType tau, Thresholds gamma,
                         ClassPair classes, double grid_step) {
  gamma.validate();
  const LatticeSetup s = setup_lattice(source, grid_step);
  const ClassTest in1(gamma.gamma1, classes.user1), in2(gamma.gamma2, classes.user2);
  double best = kInf;
  visit_lattice(source, s, [&](const PointStats& st) {
    if (!in1(st.mean_log[0]) || !in2(st.mean_log[1])) return;
    best = std::min(best, st.divergence - rho * st.entropy[static_cast<int>(tau)]);
  });
  return best;
}

double channel_primal_objective(double rho, std::span<const double> q, const PointToPointChannel& ch,
                                std::span<const double> joint) {
  if (q.size() != ch.nx || joint.size() != ch.nx * ch.ny)
    throw Error(ErrorCode::AlphabetMismatch, "joint law does not match the channel");
  std::vector<double> py(ch.ny, 0.0);
  for (std::size_t x = 0; x < ch.nx; ++x)
    for (std::size_t y = 0; y < ch.ny; ++y) py[y] += joint[x * ch.ny + y];
  double v = 0.0;
  for (std::size_t x = 0; x < ch.nx; ++x)
    for (std::size_t y = 0; y < ch.ny; ++y) {
      const double p = joint[x * ch.ny + y];
      if (p <= 0.0) continue;
      const double qw = q[x] * ch(x, y);
      if (qw <= 0.0) return kInf;
      v += p * (std::log(p / qw) + rho * std::log(p / (q[x] * py[y])));
    }
  return v;
}

std::vector<double> tilted_joint(double rho, std::span<const double> q, const PointToPointChannel& ch) {
  if (q.size() != ch.nx) throw Error(ErrorCode::AlphabetMismatch, "input distribution does not match the channel");
  const double s = 1.0 / (1.0 + rho);
  std::vector<double> e(ch.ny, 0.0);
  for (std::size_t x = 0; x < ch.nx; ++x)
    for (std::size_t y = 0; y < ch.ny; ++y)
      if (q[x] > 0.0 && ch(x, y) > 0.0) e[y] += q[x] * std::pow(ch(x, y), s);
  const TiltedMax t = tilted_max(e, rho);
  std::vector<double> joint(ch.nx * ch.ny, 0.0);
  double total = 0.0;
  for (std::size_t x = 0; x < ch.nx; ++x)
    for (std::size_t y = 0; y < ch.ny; ++y)
      if (q[x] > 0.0 && ch(x, y) > 0.0) {
        const double v = q[x] * std::pow(ch(x, y), s) * std::pow(t.v[y], rho * s);
        joint[x * ch.ny + y] = v;
        total += v;
      }
  for (double& v : joint) v /= total;
  return joint;
}

ChannelPrimal primal_channel_min(double rho, std::span<const double> q, const PointToPointChannel& ch,
                                 int restarts, std::uint64_t seed) {
  if (q.size() != ch.nx) throw Error(ErrorCode::AlphabetMismatch, "input distribution does not match the channel");
  if (ch.nx * ch.ny > kMaxChannelCells)
    throw Error(ErrorCode::DimensionTooLarge, "channel primal needs |X||Y| <= 64, got " +
                                                  std::to_string(ch.nx * ch.ny));
  std::vector<std::size_t> cells;
  for (std::size_t x = 0; x < ch.nx; ++x)
    for (std::size_t y = 0; y < ch.ny; ++y)
      if (q[x] > 0.0 && ch(x, y) > 0.0) cells.push_back(x * ch.ny + y);
  if (cells.empty()) throw Error(ErrorCode::AllZero, "input distribution and channel share no support");
  const std::size_t n = cells.size();
  constexpr double kFloor = 1e-15;

  std::vector<double> full(ch.nx * ch.ny);
  auto expand = [&](const std::vector<double>& p) {
    std::fill(full.begin(), full.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) full[cells[i]] = p[i];
    return channel_primal_objective(rho, q, ch, full);
  };
  std::vector<double> py(ch.ny);
  auto gradient = [&](const std::vector<double>& p, std::vector<double>& g) {
    std::fill(py.begin(), py.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) py[cells[i] % ch.ny] += p[i];
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t x = cells[i] / ch.ny, y = cells[i] % ch.ny;
      const double lp = std::log(p[i]);
      g[i] = lp - std::log(q[x] * ch(x, y)) + rho * (lp - std::log(q[x]) - std::log(py[y]));
    }
  };
  auto descend = [&](std::vector<double> p) {
    project_simplex(p, kFloor);
    double fp = expand(p);
    std::vector<double> g(n), trial(n);
    double step = 0.1;
    for (int it = 0; it < 100'000 && step > 1e-16; ++it) {
      gradient(p, g);
      for (std::size_t i = 0; i < n; ++i) trial[i] = p[i] - step * g[i];
      project_simplex(trial, kFloor);
      const double ft = expand(trial);
      if (ft < fp) {
        const bool stalled = fp - ft < 1e-15;
        p.swap(trial);
        fp = ft;
        if (stalled) break;
        step = std::min(2.0 * step, 0.1);
      } else {
        step *= 0.5;
      }
    }
    return std::make_pair(fp, p);
  };

  ChannelPrimal out{kInf, kInf, {}};
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> start(n);
    for (double& v : start) v = expo(rng);
    const double total = std::accumulate(start.begin(), start.end(), 0.0);
    for (double& v : start) v /= total;
    auto [fv, p] = descend(std::move(start));
    out.random_value = std::min(out.random_value, fv);
    if (fv < out.value) {
      out.value = fv;
      std::fill(full.begin(), full.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) full[cells[i]] = p[i];
      out.joint = full;
    }
  }
  const auto closed = tilted_joint(rho, q, ch);
  std::vector<double> start(n);
  for (std::size_t i = 0; i < n; ++i) start[i] = closed[cells[i]];
  auto [fv, p] = descend(std::move(start));
  const double direct = channel_primal_objective(rho, q, ch, closed);
  if (direct <= fv && direct < out.value) {
    out.value = direct;
    out.joint = closed;
  } else if (fv < out.value) {
    out.value = fv;
    std::fill(full.begin(), full.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) full[cells[i]] = p[i];
    out.joint = full;
  }
  return out;
}

TiltedMax tilted_max(std::span<const double> e, double rho) {
  if (rho < 0.0) throw Error(ErrorCode::ParameterOutOfRange, "rho must be nonnegative");
  double total = 0.0;
  for (double v : e) {
    if (v < 0.0) throw Error(ErrorCode::NegativeEntry, "tilted maximization needs e >= 0");
    total += std::pow(v, 1.0 + rho);
  }
  if (total <= 0.0) throw Error(ErrorCode::AllZero, "tilted maximization needs some e > 0");
  TiltedMax out{std::pow(total, 1.0 / (1.0 + rho)), {}};
  for (double v : e) out.v.push_back(std::pow(v, 1.0 + rho) / total);
  return out;
}

}  // namespace macexp::oracle
