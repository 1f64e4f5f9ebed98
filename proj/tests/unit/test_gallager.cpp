#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "macexp/gallager.hpp"

using namespace macexp;

TEST_CASE("es on uniform and at rho zero") {
  for (int m : {2, 3, 7})
    for (double rho : {0.0, 0.3, 1.0, 2.5}) {
      std::vector<double> p(m, 1.0 / m);
      CHECK(es(rho, p) == doctest::Approx(rho * std::log(m)).epsilon(1e-12));
    }
  CHECK(es(0.0, std::vector<double>{0.1, 0.2, 0.7}) == doctest::Approx(0.0));
}

TEST_CASE("es on a skewed binary source") {
  const std::vector<double> p = {0.01, 0.99};
  // Frozen from an mpmath evaluation of 2 log(sqrt(.01) + sqrt(.99)).
  CHECK(es(1.0, p) == doctest::Approx(0.18148578048131660).epsilon(1e-13));
  // Variational form: max over the simplex of -D(q||p) + H(q) on a 1e-4 grid.
  double best = -kInf;
  for (int k = 1; k < 10000; ++k) {
    const double a = k * 1e-4, b = 1.0 - a;
    const double v = -(a * std::log(a / p[0]) + b * std::log(b / p[1])) - (a * std::log(a) + b * std::log(b));
    best = std::max(best, v);
  }
  CHECK(std::abs(es(1.0, p) - best) < 1e-7);
}

TEST_CASE("e0 reference values") {
  const auto id = PointToPointChannel::from_rows({{1, 0}, {0, 1}});
  const std::vector<double> u = {0.5, 0.5};
  for (double rho : {0.0, 0.25, 0.5, 1.0}) CHECK(e0(rho, u, id) == doctest::Approx(rho * std::log(2.0)));

  const auto bsc = PointToPointChannel::from_rows({{0.9, 0.1}, {0.1, 0.9}});
  // Frozen from mpmath.
  CHECK(e0(0.5, u, bsc) == doctest::Approx(0.14004710212025793).epsilon(1e-12));

  std::mt19937_64 rng(7);
  for (int t = 0; t < 10; ++t) {
    const auto ch = PointToPointChannel::from_rows(fixtures::random_rows(rng, 3, 4));
    CHECK(std::abs(e0(0.0, fixtures::random_simplex(rng, 3), ch)) < 1e-14);
  }
}

TEST_CASE("es_tau") {
  const auto src = JointSource::from_matrix(fixtures::kExampleSource);
  for (double rho : {0.0, 0.4, 1.0})
    CHECK(es_tau(rho, src, ErrorType::Both) == doctest::Approx(es(rho, src.flat())).epsilon(1e-13));

  const auto uni = JointSource::from_matrix({{0.25, 0.25}, {0.25, 0.25}});
  for (double rho : {0.2, 0.9}) {
    CHECK(es_tau(rho, uni, ErrorType::User1) == doctest::Approx(rho * std::log(2.0)));
    CHECK(es_tau(rho, uni, ErrorType::User2) == doctest::Approx(rho * std::log(2.0)));
  }
  // Frozen from mpmath on the example source at rho = 1.
  CHECK(es_tau(1.0, src, ErrorType::User1) == doctest::Approx(0.17807067862715697).epsilon(1e-12));
  CHECK(es_tau(1.0, src, ErrorType::User2) == doctest::Approx(0.04768941741052467).epsilon(1e-12));
  CHECK(es_tau(1.0, src, ErrorType::Both) == doctest::Approx(0.25665528876986752).epsilon(1e-12));
}

TEST_CASE("rho_gamma") {
  SUBCASE("uniform marginal takes rho = 0") {
    const auto r = rho_gamma(std::vector<double>{0.5, 0.5}, 0.5);
    CHECK(r.kind == RhoGamma::Kind::Root);
    CHECK(r.rho == 0.0);
  }
  const std::vector<double> p = {0.01, 0.99};
  SUBCASE("sentinels") {
    CHECK(rho_gamma(p, 0.005).kind == RhoGamma::Kind::BelowMin);
    CHECK(rho_gamma(p, 0.995).kind == RhoGamma::Kind::AboveMax);
  }
  SUBCASE("interior root") {
    const auto r = rho_gamma(p, 0.8469);
    REQUIRE(r.kind == RhoGamma::Kind::Root);
    CHECK(std::abs(tilted_mean_log(p, r.tilt) - std::log(0.8469)) < 1e-9);
    // Frozen from an mpmath root of the same equation.
    CHECK(r.rho == doctest::Approx(0.37268390793447875).epsilon(1e-8));
    CHECK(r.tilt == doctest::Approx(1.0 / (1.0 + r.rho)));
  }
  SUBCASE("point mass") {
    CHECK_THROWS_AS(rho_gamma(std::vector<double>{1.0, 0.0}, 0.5), Error);
    CHECK_NOTHROW(rho_gamma(std::vector<double>{1.0, 0.0}, 1.0));
  }
}

TEST_CASE("es_class") {
  const std::vector<double> p = {0.01, 0.99};
  SUBCASE("inactive constraint") {
    for (double rho : {0.0, 0.5, 1.0}) {
      const auto v = es_class(rho, p, 0.005, MessageClass::First);
      CHECK(v.value == doctest::Approx(es(rho, p)).epsilon(1e-12));
      REQUIRE(v.lambda);
      CHECK((*v.lambda)[0] == 0.0);
    }
  }
  SUBCASE("empty classes") {
    CHECK(es_class(0.5, p, 1.0, MessageClass::First).is_neg_inf());
    CHECK(es_class(0.5, p, 0.01, MessageClass::Second).is_neg_inf());
    CHECK(es_class(0.5, p, 0.005, MessageClass::Second).is_neg_inf());
    CHECK_FALSE(es_class(0.5, p, 0.99, MessageClass::First).is_neg_inf());
    CHECK(class_is_empty(p, 0.995, MessageClass::First));
  }
  SUBCASE("tangent form") {
    // Frozen from mpmath: with t the tilt solving the mean equation at gamma,
    // the value is (1+rho)[log sum p^t + (1/(1+rho) - t) log gamma] when the
    // constraint binds.
    CHECK(es_class(0.7, p, 0.5, MessageClass::Second).value ==
          doctest::Approx(0.021486020073820232).epsilon(1e-8));
    CHECK(es_class(0.7, p, 0.5, MessageClass::First).value ==
          doctest::Approx(0.10020175955203208).epsilon(1e-8));
  }
  SUBCASE("never above es") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
      const auto q = fixtures::random_simplex(rng, 4);
      const double rho = unit(rng), g = unit(rng);
      for (auto cls : {MessageClass::First, MessageClass::Second})
        CHECK(es_class(rho, q, g, cls).value <= es(rho, q) + 1e-12);
    }
  }
}

TEST_CASE("es convex and nondecreasing, e0 concave") {
  std::mt19937_64 rng(2024);
  const int n = 41;
  for (int t = 0; t < 25; ++t) {
    const auto p = fixtures::random_simplex(rng, 2 + t % 5);
    const auto q = fixtures::random_simplex(rng, 3);
    const auto ch = PointToPointChannel::from_rows(fixtures::random_rows(rng, 3, 1 + t % 4 + 1));
    std::vector<double> s(n), c(n);
    for (int k = 0; k < n; ++k) {
      const double rho = static_cast<double>(k) / (n - 1);
      s[k] = es(2.0 * rho, p);
      c[k] = e0(rho, q, ch);
    }
    CHECK(std::abs(s[0]) < 1e-14);
    for (int k = 0; k < n; ++k) CHECK(s[k] >= -1e-14);
    for (int k = 1; k < n; ++k) CHECK(s[k] - s[k - 1] >= -1e-12);
    for (int k = 1; k + 1 < n; ++k) {
      CHECK(s[k + 1] - 2 * s[k] + s[k - 1] >= -1e-9);
      CHECK(c[k + 1] - 2 * c[k] + c[k - 1] <= 1e-9);
    }
  }
}
