#include "macexp/validation.hpp"

#include <cmath>
#include <sstream>

#include "macexp/channels.hpp"
#include "macexp/correlated.hpp"
#include "macexp/gallager.hpp"
#include "macexp/oracle.hpp"

namespace macexp {
namespace {

constexpr double kRhos[] = {0.0, 0.25, 0.5, 0.75, 1.0};
constexpr double kGammas[] = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};

// Number of compositions of n into k parts, saturating.
double compositions(int n, std::size_t k) {
  double c = 1.0;
  for (std::size_t j = 1; j < k; ++j) c = c * (n + static_cast<double>(j)) / static_cast<double>(j);
  return c;
}

std::string describe(double rho, Thresholds g, ErrorType tau, ClassPair c) {
  std::ostringstream s;
  s.precision(6);
  s << "rho=" << rho << " gamma=(" << g.gamma1 << "," << g.gamma2 << ") tau=" << to_string(tau)
    << " classes=(" << static_cast<int>(c.user1) << "," << static_cast<int>(c.user2) << ")";
  return s.str();
}

void record(CheckResult& r, double discrepancy, const std::string& where) {
  ++r.samples;
  if (discrepancy > r.max_discrepancy) {
    r.max_discrepancy = discrepancy;
    r.worst = where;
  }
  if (discrepancy > r.tolerance) r.passed = false;
}

CheckResult source_check(const JointSource& source, const ValidationOptions& opts) {
  CheckResult r;
  r.name = "source-dual-vs-lattice";
  if (source.cells() > oracle::kMaxSourceCells) {
    r.skipped = 1;
    r.worst = "source alphabet too large for the lattice";
    return r;
  }
  std::size_t support = 0;
  for (double p : source.flat()) support += p > 0.0;
  int n = 1000;
  while (n > 1 && compositions(n, support) > static_cast<double>(opts.max_lattice_points)) --n;
  const double step = 1.0 / n;
  r.tolerance = lattice_slack(source, step);
  const oracle::SourceLattice lattice(source, step);
  for (double g1 : kGammas)
    for (double g2 : kGammas)
      for (ClassPair c : kClassPairs) {
        const Thresholds g{g1, g2};
        const auto table = lattice.primal_min_table(kRhos, g, c);
        for (std::size_t k = 0; k < std::size(kRhos); ++k)
          for (ErrorType tau : kErrorTypes) {
            const double rho = kRhos[k];
            const double dual = es_corr(rho, source, g, tau, c).value;
            const double primal = table[static_cast<int>(tau)][k];
            const std::string where = describe(rho, g, tau, c);
            if (std::isinf(dual) || std::isinf(primal)) {
              // An empty class must be empty on the lattice too.
              record(r, (dual == -kInf && primal == kInf) ? 0.0 : kInf, where);
              continue;
            }
            // Lattice points are feasible, so -primal can only undershoot the dual.
            const double gap = dual + primal;
            record(r, gap < -1e-9 ? kInf : gap, where);
          }
      }
  return r;
}

void channel_checks(const Instance& inst, const ValidationOptions& opts, CheckResult& descent,
                    CheckResult& closed) {
  for (ErrorType tau : kErrorTypes)
    for (ClassPair c : kClassPairs) {
      const SuperChannel sc = reduce_to_support(superchannel(tau, inst.channel, inst.bank, c));
      if (sc.ch.nx * sc.ch.ny > oracle::kMaxChannelCells) {
        ++descent.skipped;
        ++closed.skipped;
        continue;
      }
      for (double rho : kRhos) {
        std::ostringstream where;
        where << "tau=" << to_string(tau) << " classes=(" << static_cast<int>(c.user1) << ","
              << static_cast<int>(c.user2) << ") rho=" << rho;
        const double e = e0(rho, sc.q, sc.ch);
        const auto primal = oracle::primal_channel_min(rho, sc.q, sc.ch, opts.channel_restarts, opts.seed);
        // The random starts alone must reach e0; the closed-form start would
        // make the check circular.
        record(descent, std::max(std::abs(primal.value - e), std::abs(primal.random_value - e)), where.str());
        const double direct =
            oracle::channel_primal_objective(rho, sc.q, sc.ch, oracle::tilted_joint(rho, sc.q, sc.ch));
        record(closed, std::abs(direct - e), where.str());
      }
    }
}

}  // namespace

double lattice_slack(const JointSource& source, double grid_step) {
  double min_p = 1.0;
  for (double p : source.flat())
    if (p > 0.0) min_p = std::min(min_p, p);
  return 2.0 * grid_step * std::abs(std::log(min_p));
}

std::vector<CheckResult> validate_dual_forms(const Instance& instance, const ValidationOptions& opts) {
  std::vector<CheckResult> out;
  out.push_back(source_check(instance.source, opts));
  CheckResult descent;
  descent.name = "channel-dual-vs-descent";
  descent.tolerance = 1e-4;
  CheckResult closed;
  closed.name = "channel-closed-form";
  closed.tolerance = 1e-8;
  channel_checks(instance, opts, descent, closed);
  out.push_back(descent);
  out.push_back(closed);
  return out;
}

}  // namespace macexp
