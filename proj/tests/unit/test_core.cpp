#include "doctest.h"

#include "dunkl/core.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace dunkl;

TEST_CASE("reflect flips one coordinate and is an involution") {
  const Point x{1.0, 2.0};
  CHECK(reflect(x, 1) == Point{-1.0, 2.0});
  CHECK(reflect(Point{0.0, 5.0}, 1) == Point{0.0, 5.0});
  std::mt19937 gen(7);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 50; ++trial) {
    Point y{nd(gen), nd(gen), nd(gen)};
    for (std::size_t j = 1; j <= 3; ++j) CHECK(reflect(reflect(y, j), j) == y);
  }
  CHECK_THROWS_AS(reflect(x, 0), std::out_of_range);
  CHECK_THROWS_AS(reflect(x, 3), std::out_of_range);
}

TEST_CASE("parity class is the unique eps with k in N_eps") {
  CHECK(parity_class(MultiIndex({2, 3})) == ParityVector({0, 1}));
  CHECK(parity_class(MultiIndex({0, 0, 0})) == ParityVector({0, 0, 0}));
  CHECK(parity_class(MultiIndex({1})) == ParityVector({1}));
  for (const auto& k : enumerate_multi_indices(3, 5)) {
    int hits = 0;
    for (const auto& e : ParityVector::all(3)) hits += in_parity_class(k, e) ? 1 : 0;
    CHECK(hits == 1);
    CHECK(in_parity_class(k, parity_class(k)));
  }
  CHECK_THROWS(ParityVector({0, 2}));
}

TEST_CASE("multi-index enumeration is graded and complete") {
  const auto ks = enumerate_multi_indices(2, 4);
  CHECK(ks.size() == 15);
  for (std::size_t i = 1; i < ks.size(); ++i) CHECK(ks[i - 1].norm1() <= ks[i].norm1());
  CHECK(MultiIndex({3, 1, 2}).norm1() == 6);
}

TEST_CASE("multiplicity index and eigenvalues") {
  CHECK_THROWS_WITH(MultiplicityIndex({-0.8}), "alpha below -1/2");
  CHECK(MultiplicityIndex({0.5, 1.25}).norm1() == doctest::Approx(1.75));
  CHECK(eigenvalue(0, MultiplicityIndex({-0.5})) == 1.0);
  CHECK(eigenvalue(2, MultiplicityIndex({0.0, 0.0})) == 8.0);
  CHECK(eigenvalue(0, MultiplicityIndex({0.5})) == 3.0);
  const MultiplicityIndex a({0.7, -0.5});
  for (int n = 0; n < 20; ++n) CHECK(eigenvalue(n + 1, a) > eigenvalue(n, a));
  CHECK(eigenvalue(0, a) > 0.0);
}

TEST_CASE("epsilon projection examples") {
  const Function id = [](std::span<const double> x) { return Complex(x[0]); };
  const Function ex = [](std::span<const double> x) { return Complex(std::exp(x[0])); };
  for (double x : {-1.3, 0.2, 2.5}) {
    const Point p{x};
    CHECK(std::abs(epsilon_project(id, ParityVector({1}), p) - x) < 1e-15);
    CHECK(std::abs(epsilon_project(id, ParityVector({0}), p)) < 1e-15);
    CHECK(std::abs(epsilon_project(ex, ParityVector({0}), p) - std::cosh(x)) < 1e-14);
  }
}

TEST_CASE("epsilon projections are complete and idempotent") {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> ud(-1.5, 1.5);
  for (std::size_t d = 1; d <= 3; ++d) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> a(d), b(d), c(d);
      for (std::size_t j = 0; j < d; ++j) {
        a[j] = ud(gen);
        b[j] = ud(gen);
        c[j] = ud(gen);
      }
      const Function f = [=](std::span<const double> x) {
        Complex s = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) s += Complex(a[j] * x[j], b[j] * x[j] * x[j]) + c[j] * x[j] * x[j] * x[j];
        return std::exp(0.3 * s);
      };
      for (int pt = 0; pt < 10; ++pt) {
        Point x(d);
        for (double& v : x) v = ud(gen);
        Complex total = 0.0;
        for (const auto& e : ParityVector::all(d)) {
          const Complex fe = epsilon_project(f, e, x);
          total += fe;
          const Function proj = epsilon_projection(f, e);
          CHECK(std::abs(epsilon_project(proj, e, x) - fe) < 1e-12);
          for (std::size_t j = 1; j <= d; ++j) {
            const double sign = e[j - 1] ? -1.0 : 1.0;
            CHECK(std::abs(proj(reflect(x, j)) - sign * fe) < 1e-12);
          }
        }
        CHECK(std::abs(total - f(x)) < 1e-12 * std::max(1.0, std::abs(f(x))));
      }
    }
  }
}

TEST_CASE("zeta and t change of variable") {
  CHECK(t_of_zeta(std::tanh(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(t_of_zeta(0.5) == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-14));
  CHECK(t_of_zeta(1e-12) < 1e-11);
  for (double z = 1e-6; z < 1.0 - 1e-6; z = z * 1.37 + 1e-7) {
    CHECK(std::abs(zeta_of_t(t_of_zeta(z)) - z) <= 1e-12 * z);
  }
  CHECK_THROWS_AS(t_of_zeta(0.0), std::domain_error);
  CHECK_THROWS_AS(t_of_zeta(1.0), std::domain_error);
  CHECK_THROWS_AS(zeta_of_t(0.0), std::domain_error);
}

TEST_CASE("measure of product balls") {
  CHECK(measure_ball(Point{2.0}, 1.0, MultiplicityIndex({-0.5})) == doctest::Approx(2.0));
  CHECK(measure_ball(Point{2.0}, 1.0, MultiplicityIndex({0.0})) == doctest::Approx(4.0));
  CHECK(measure_ball(Point{0.5}, 1.0, MultiplicityIndex({0.0})) == doctest::Approx(1.125));
  CHECK_THROWS(measure_ball(Point{1.0}, 0.0, MultiplicityIndex({0.0})));
  CHECK_THROWS(measure_ball(Point{1.0}, -1.0, MultiplicityIndex({0.0})));
}

TEST_CASE("measure_ball is monotone, additive and doubling") {
  const MultiplicityIndex alpha({0.7, -0.5});
  const Point x{0.3, 1.7};
  double prev = 0.0;
  for (double r = 1e-3; r < 10.0; r *= 1.5) {
    const double m = measure_ball(x, r, alpha);
    CHECK(m > prev);
    prev = m;
  }
  // split a box along each axis
  const Box whole{{0.2, 0.5}, {1.4, 2.0}};
  for (std::size_t j = 0; j < 2; ++j) {
    Box left = whole, right = whole;
    left.hi[j] = right.lo[j] = 0.5 * (whole.lo[j] + whole.hi[j]);
    CHECK(box_measure(left, alpha) + box_measure(right, alpha) ==
          doctest::Approx(box_measure(whole, alpha)).epsilon(1e-13));
  }

  auto doubling = [&](int per_decade, double lo, double hi) {
    double c = 0.0;
    const double step = std::pow(10.0, 1.0 / per_decade);
    for (double a = lo; a <= hi; a *= step) {
      for (double b = lo; b <= hi; b *= step) {
        for (double r = lo; r <= hi; r *= step) {
          const Point p{a, b};
          c = std::max(c, measure_ball(p, 2 * r, alpha) / measure_ball(p, r, alpha));
        }
      }
    }
    return c;
  };
  const double c1 = doubling(2, 1e-3, 1e2);
  const double c2 = doubling(4, 1e-4, 1e3);
  CHECK(std::isfinite(c1));
  CHECK(c2 / c1 < 2.0);
  CHECK(c2 <= std::pow(2.0, 2 * 0.7 + 2) * 2.0 + 1e-9);
}

TEST_CASE("empirical A_p constants") {
  BallFamily fam;
  for (double c = 0.1; c < 10.0; c *= 1.7) {
    fam.centers.push_back({c});
    fam.radii.push_back(0.5 * c);
  }
  const MultiplicityIndex a0({0.0});
  for (double p : {1.0, 1.5, 2.0, 4.0}) CHECK(ap_constant_estimate(PowerWeight({0.0}), p, a0, fam) == 1.0);

  // U(x) = x away from 0: finite and stable when the family is refined
  BallFamily fine = fam;
  for (double c = 0.13; c < 10.0; c *= 1.3) {
    fine.centers.push_back({c});
    fine.radii.push_back(0.3 * c);
  }
  const double q1 = ap_constant_estimate(PowerWeight({1.0}), 2.0, a0, fam);
  const double q2 = ap_constant_estimate(PowerWeight({1.0}), 2.0, a0, fine);
  CHECK(std::isfinite(q1));
  CHECK(q2 >= q1);
  CHECK(q2 / q1 < 2.0);

  // U(x) = x^{-3}: boxes [e, 1] with e -> 0 blow up
  double last = 0.0;
  for (double e = 0.1; e > 1e-8; e *= 0.1) {
    BallFamily f1{{{0.5 * (1.0 + e)}}, {0.5 * (1.0 - e)}};
    const double q = ap_constant_estimate(PowerWeight({-3.0}), 2.0, a0, f1);
    CHECK(q > 5.0 * last);
    last = q;
  }
  CHECK(last > 1e6);
  CHECK_THROWS(ap_constant_estimate(PowerWeight({1.0}), 0.5, a0, fam));
}
