#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "macexp/channels.hpp"
#include "macexp/exponents.hpp"

using namespace macexp;

namespace {

const Thresholds kStar{0.8469, 0.6581};

int tau_index(ErrorType t) { return static_cast<int>(t); }

// Table values printed to four decimals.
constexpr double kTableTol = 5e-4;

Instance single_distribution_instance() {
  const std::vector<double> narrow = {0, 0, 0, 0, 0.5, 0.5};
  const std::vector<double> wide = {0.25, 0.25, 0.25, 0.25, 0, 0};
  return make_instance(fixtures::kExampleSource, build_example_channel(0.045, 0.01).to_tensor(),
                       fixtures::bank_of(narrow, narrow, wide, wide));
}

}  // namespace

TEST_CASE("F at the reference thresholds") {
  const auto inst = fixtures::example_instance();
  CHECK(std::abs(big_f(ErrorType::User2, kClassPairs[2], kStar, inst).value - 0.2611) < kTableTol);
  CHECK(std::abs(big_f(ErrorType::User1, kClassPairs[0], kStar, inst).value - 0.3172) < kTableTol);
  const auto v = big_f(ErrorType::Both, kClassPairs[3], kStar, inst);
  CHECK(std::abs(v.value - 0.2883) < kTableTol);
  REQUIRE(v.rho);
  CHECK(*v.rho >= 0.0);
  CHECK(*v.rho <= 1.0);
  CHECK(big_f(ErrorType::User1, kClassPairs[0], {1.0, 0.5}, inst).is_pos_inf());
  CHECK(big_f(ErrorType::Both, kClassPairs[1], {1.0, 0.5}, inst).is_pos_inf());
}

TEST_CASE("f takes the smallest error type") {
  const auto inst = fixtures::example_instance();
  const auto f11 = small_f(kClassPairs[0], kStar, inst);
  CHECK(std::abs(f11.value.value - 0.2611) < kTableTol);
  CHECK(f11.tau == ErrorType::Both);
  const auto f12 = small_f(kClassPairs[1], kStar, inst);
  CHECK(std::abs(f12.value.value - 0.2735) < kTableTol);
  CHECK(f12.tau == ErrorType::User1);
  for (auto tau : kErrorTypes) CHECK(f12.per_tau[tau_index(tau)].value >= f12.value.value);
  CHECK(small_f(kClassPairs[0], {1.0, 0.3}, inst).value.is_pos_inf());
}

TEST_CASE("i.i.d. exponents and the lower bound") {
  const auto inst = fixtures::example_instance();
  const auto& bank = inst.bank;
  const auto v21 = iid_exponent(inst, bank.get(0, MessageClass::Second), bank.get(1, MessageClass::First));
  CHECK(std::abs(v21.value.value - 0.2503) < kTableTol);
  const auto v11 = iid_exponent(inst, bank.get(0, MessageClass::First), bank.get(1, MessageClass::First));
  CHECK(std::abs(v11.value.value - 0.2097) < kTableTol);
  CHECK(std::abs(v11.per_tau[0].value - 0.2682) < kTableTol);
  CHECK(std::abs(v11.per_tau[1].value - 0.3986) < kTableTol);

  const auto lb = lower_bound(inst);
  CHECK(std::abs(lb.value - 0.2503) < kTableTol);
  CHECK(lb.classes == kClassPairs[2]);
  const double both_row[4] = {0.2097, 0.2097, 0.2630, 0.2360};
  for (int c = 0; c < 4; ++c) CHECK(std::abs(lb.table[2][c] - both_row[c]) < kTableTol);
  for (int c = 0; c < 4; ++c) CHECK(lb.iid[c] <= lb.value);
}

TEST_CASE("deterministic source leaves only the channel term") {
  const auto base = fixtures::example_instance();
  const auto inst = make_instance({{1.0, 0.0}, {0.0, 0.0}}, base.channel.to_tensor(), base.bank.data());
  const auto q1 = inst.bank.get(0, MessageClass::First), q2 = inst.bank.get(1, MessageClass::Second);
  const auto v = iid_exponent(inst, q1, q2);
  // e0 is nondecreasing in rho, so the inner maximum sits at rho = 1.
  double expect = kInf;
  for (auto tau : kErrorTypes) {
    const auto sc = superchannel(tau, inst.channel, inst.bank, kClassPairs[1]);
    expect = std::min(expect, e0(1.0, sc.q, sc.ch));
  }
  CHECK(v.value.value >= 0.0);
  CHECK(v.value.value == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("F is monotone along threshold chains") {
  const auto inst = fixtures::example_instance();
  for (auto tau : kErrorTypes)
    for (auto cls : kClassPairs) {
      double prev1 = 0.0, prev2 = 0.0;
      for (int k = 0; k <= 10; ++k) {
        const double g = 0.1 * k;
        const double v1 = big_f(tau, cls, {g, 0.6}, inst).value;
        const double v2 = big_f(tau, cls, {0.85, g}, inst).value;
        if (k > 0) {
          if (cls.user1 == MessageClass::First)
            CHECK(v1 >= prev1 - 1e-7);
          else
            CHECK(v1 <= prev1 + 1e-7);
          if (cls.user2 == MessageClass::First)
            CHECK(v2 >= prev2 - 1e-7);
          else
            CHECK(v2 <= prev2 + 1e-7);
        }
        prev1 = v1;
        prev2 = v2;
      }
    }
}

TEST_CASE("the rho objective is unimodal and its maximum matches a fine grid") {
  const auto inst = fixtures::example_instance();
  for (auto tau : kErrorTypes)
    for (auto cls : kClassPairs) {
      const auto sc = superchannel(tau, inst.channel, inst.bank, cls);
      CorrelatedSourceExponent src(inst.source, kStar, tau, cls);
      if (src.empty()) continue;
      const int n = 200;
      std::vector<double> obj(n);
      for (int k = 0; k < n; ++k) {
        const double rho = static_cast<double>(k) / (n - 1);
        obj[k] = e0(rho, sc.q, sc.ch) - src.evaluate(rho).value;
      }
      int changes = 0, sign = 0;
      for (int k = 1; k < n; ++k) {
        const double d = obj[k] - obj[k - 1];
        if (std::abs(d) < 1e-9) continue;
        const int s = d > 0 ? 1 : -1;
        if (sign != 0 && s != sign) ++changes;
        sign = s;
      }
      CHECK(changes <= 1);
      const double grid_max = *std::max_element(obj.begin(), obj.end());
      const double v = big_f(tau, cls, kStar, inst).value;
      CHECK(v >= grid_max - 1e-9);
      CHECK(v - grid_max < 1e-3);
    }
}

TEST_CASE("boundary corners reduce to i.i.d. exponents") {
  const auto inst = fixtures::example_instance();
  const auto& bank = inst.bank;
  const std::array<Thresholds, 4> corners = {Thresholds{0, 0}, Thresholds{0, 1}, Thresholds{1, 0}, Thresholds{1, 1}};
  for (int c = 0; c < 4; ++c) {
    const auto cls = kClassPairs[c];
    const double expect = iid_exponent(inst, bank.get(0, cls.user1), bank.get(1, cls.user2)).value.value;
    for (int k = 0; k < 4; ++k) {
      const double v = small_f(kClassPairs[k], corners[c], inst).value.value;
      if (k == c)
        CHECK(std::abs(v - expect) < 1e-8);
      else
        CHECK(v == kInf);
    }
  }
}

TEST_CASE("single-distribution bank") {
  const auto inst = single_distribution_instance();
  const auto opt = optimize_thresholds(inst);
  const auto iid = iid_exponent(inst, inst.bank.get(0, MessageClass::First), inst.bank.get(1, MessageClass::First));
  CHECK(opt.exponent.value == doctest::Approx(iid.value.value).epsilon(1e-9));
  CHECK(lower_bound(inst).value == doctest::Approx(iid.value.value).epsilon(1e-9));

  const auto report = assignment_search(inst);
  CHECK(report.ties.size() == 4);
  CHECK(report.best_assignment.index() == 0);
  for (double e : report.assignment_exponents) CHECK(e == doctest::Approx(report.exponent.value).epsilon(1e-9));
}

TEST_CASE("example instance optimum") {
  const auto inst = fixtures::example_instance();
  const auto opt = optimize_thresholds(inst);
  CHECK(std::abs(opt.exponent.value - 0.2611) < kTableTol);
  CHECK(std::abs(opt.gamma.gamma1 - 0.8469) < 5e-3);
  CHECK(std::abs(opt.gamma.gamma2 - 0.6581) < 5e-3);
  CHECK(opt.residuals[0] < 1e-4);
  CHECK(opt.residuals[1] < 1e-4);
  CHECK(opt.kind[0] == ThresholdKind::Equalized);
  CHECK(opt.kind[1] == ThresholdKind::Equalized);
  CHECK(opt.exponent.value >= lower_bound(inst).value - 1e-6);
  double m = kInf;
  for (const auto& f : opt.f) m = std::min(m, f.value.value);
  CHECK(m == opt.exponent.value);
}

TEST_CASE("grid argmax tie rule") {
  auto point = [](double g1, double g2, std::array<double, 4> f) {
    GammaGridPoint p{{g1, g2}, f, *std::min_element(f.begin(), f.end())};
    return p;
  };
  std::vector<GammaGridPoint> grid = {
      point(0.0, 0.0, {0.3, 0.4, 0.5, 0.6}),
      point(0.0, 1.0, {0.5, 0.9, 0.5, 0.9}),
      point(1.0, 0.0, {0.5, 0.5, 0.5, 0.5}),
      point(1.0, 1.0, {0.5, 0.5 + 1e-10, 0.6, 0.5}),
  };
  CHECK(&grid_argmax(grid) == &grid[2]);
  CHECK(equalization_residual(grid[2].f) == 0.0);
  grid[2].f = {0.5, 0.5, 0.8, 0.8};
  CHECK(&grid_argmax(grid) == &grid[3]);
  grid.resize(2);
  CHECK(&grid_argmax(grid) == &grid[1]);
  CHECK_THROWS_AS(grid_argmax({}), Error);
}

TEST_CASE("extended difference") {
  CHECK(extended_difference(kInf, kInf) == 0.0);
  CHECK(extended_difference(kInf, 1.0) == kInf);
  CHECK(extended_difference(1.0, kInf) == -kInf);
  CHECK(extended_difference(0.5, 0.25) == 0.25);
}
