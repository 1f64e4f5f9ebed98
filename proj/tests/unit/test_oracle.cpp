#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "macexp/channels.hpp"
#include "macexp/gallager.hpp"
#include "macexp/oracle.hpp"
#include "macexp/validation.hpp"

using namespace macexp;

TEST_CASE("source lattice, unconstrained") {
  const auto src = JointSource::from_matrix(fixtures::kExampleSource);
  const double step = 1.0 / 200;
  const oracle::SourceLattice lattice(src, step);
  CHECK(lattice.size() == 1373701);  // C(203, 3)
  const double slack = lattice_slack(src, step);
  CHECK(slack == doctest::Approx(2 * step * std::abs(std::log(0.0005))));
  for (auto tau : kErrorTypes) {
    for (double rho : {0.0, 0.25, 1.0}) {
      const double primal = lattice.primal_min(rho, tau, {0, 0}, kClassPairs[0]);
      const double dual = es_tau(rho, src, tau);
      CHECK(primal >= -dual - 1e-12);
      CHECK(primal <= -dual + slack);
    }
  }
}

TEST_CASE("source lattice reaches zero at a source on the lattice") {
  const auto src = JointSource::from_matrix({{0.25, 0.25}, {0.3, 0.2}});
  for (auto tau : kErrorTypes)
    CHECK(std::abs(oracle::primal_source_min(0.0, src, tau, {0, 0}, kClassPairs[0], 0.05)) < 1e-15);
}

TEST_CASE("source lattice on an infeasible class") {
  const auto src = JointSource::from_matrix(fixtures::kExampleSource);
  CHECK(oracle::primal_source_min(0.5, src, ErrorType::Both, {1.0, 0.0}, kClassPairs[0], 0.05) == kInf);
}

TEST_CASE("source lattice limits") {
  const auto big = JointSource::from_matrix({{0.1, 0.1, 0.1, 0.1}, {0.2, 0.1, 0.1, 0.2}});
  CHECK_THROWS_AS(oracle::SourceLattice(big, 0.1), Error);
  const auto src = JointSource::from_matrix({{0.1, 0.2, 0.1}, {0.2, 0.2, 0.2}});
  CHECK_THROWS_AS(oracle::SourceLattice(src, 1e-4), Error);
  CHECK_THROWS_AS(oracle::SourceLattice(src, 1e-3), Error);  // C(1005, 5) points
  try {
    oracle::SourceLattice(big, 0.1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AlphabetTooLarge);
  }
  try {
    oracle::SourceLattice(src, 1e-3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionTooLarge);
  }
}

TEST_CASE("channel primal") {
  std::mt19937_64 rng(123);
  for (int t = 0; t < 12; ++t) {
    const std::size_t nx = 2 + t % 3, ny = 2 + (t / 3) % 3;
    const auto q = fixtures::random_simplex(rng, nx);
    const auto ch = PointToPointChannel::from_rows(fixtures::random_rows(rng, nx, ny));
    for (double rho : {0.0, 0.5, 1.0}) {
      const double target = e0(rho, q, ch);
      const auto joint = oracle::tilted_joint(rho, q, ch);
      CHECK(std::abs(oracle::channel_primal_objective(rho, q, ch, joint) - target) < 1e-8);
      const auto p = oracle::primal_channel_min(rho, q, ch, 3, 1000 + t);
      CHECK(std::abs(p.random_value - target) < 1e-4);
      CHECK(p.value >= target - 1e-9);
    }
  }

  SUBCASE("zero at rho 0 from qW") {
    const std::vector<double> q = {0.3, 0.7};
    const auto ch = PointToPointChannel::from_rows({{0.9, 0.1}, {0.2, 0.8}});
    std::vector<double> qw = {0.27, 0.03, 0.14, 0.56};
    CHECK(std::abs(oracle::channel_primal_objective(0.0, q, ch, qw)) < 1e-15);
    CHECK(oracle::channel_primal_objective(0.5, q, PointToPointChannel::from_rows({{1, 0}, {0.2, 0.8}}), qw) == kInf);
  }
}

TEST_CASE("channel primal on a reduced superchannel") {
  const auto inst = fixtures::example_instance();
  const auto sc = reduce_to_support(superchannel(ErrorType::User1, inst.channel, inst.bank, kClassPairs[0]));
  REQUIRE(sc.ch.nx * sc.ch.ny <= oracle::kMaxChannelCells);
  const auto p = oracle::primal_channel_min(0.5, sc.q, sc.ch, 4, 9);
  CHECK(std::abs(p.random_value - e0(0.5, sc.q, sc.ch)) < 1e-4);

  const auto full = superchannel(ErrorType::User1, inst.channel, inst.bank, kClassPairs[3]);
  CHECK_THROWS_AS(oracle::primal_channel_min(0.5, full.q, full.ch, 1), Error);
}

TEST_CASE("tilted maximum") {
  const std::vector<double> c(5, 0.3);
  for (double rho : {0.0, 0.5, 2.0}) {
    const auto t = oracle::tilted_max(c, rho);
    CHECK(t.value == doctest::Approx(0.3 * std::pow(5.0, 1.0 / (1.0 + rho))));
    for (double v : t.v) CHECK(v == doctest::Approx(0.2));
  }
  const std::vector<double> e = {0.1, 0.0, 0.6, 0.3};
  const auto t0 = oracle::tilted_max(e, 0.0);
  CHECK(t0.value == doctest::Approx(1.0));
  for (std::size_t y = 0; y < e.size(); ++y) CHECK(t0.v[y] == doctest::Approx(e[y]));

  std::mt19937_64 rng(77);
  for (int t = 0; t < 5; ++t) {
    const auto r = fixtures::random_simplex(rng, 6);
    const double rho = 0.5;
    const auto best = oracle::tilted_max(r, rho);
    for (int k = 0; k < 10000; ++k) {
      const auto v = fixtures::random_simplex(rng, 6);
      double s = 0.0;
      for (int y = 0; y < 6; ++y) s += r[y] * std::pow(v[y], rho / (1.0 + rho));
      CHECK(s <= best.value + 1e-12);
    }
  }

  CHECK_THROWS_AS(oracle::tilted_max(std::vector<double>{0.0, 0.0}, 0.5), Error);
  CHECK_THROWS_AS(oracle::tilted_max(std::vector<double>{0.5, -0.1}, 0.5), Error);
}

TEST_CASE("validation on a small synthetic instance") {
  const Tensor3 w = {{{0.9, 0.1}, {0.6, 0.4}}, {{0.3, 0.7}, {0.05, 0.95}}};
  const auto inst = make_instance({{0.4, 0.1}, {0.2, 0.3}}, w,
                                  fixtures::bank_of({0.5, 0.5}, {0.9, 0.1}, {0.5, 0.5}, {0.2, 0.8}));
  ValidationOptions opts;
  opts.max_lattice_points = 200'000;
  const auto checks = validate_dual_forms(inst, opts);
  REQUIRE(checks.size() == 3);
  for (const auto& c : checks) {
    INFO(c.name << ": " << c.worst);
    CHECK(c.passed);
    CHECK(c.samples > 0);
    CHECK(c.skipped == 0);
  }
}
