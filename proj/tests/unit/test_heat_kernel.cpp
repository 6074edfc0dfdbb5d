#include "doctest.h"

#include "dunkl/basis.hpp"
#include "dunkl/heat_kernel.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace dunkl;

namespace {

double mehler(double t, double x, double y) {
  const double s = std::sinh(2 * t);
  return std::exp(-0.5 * (x * x + y * y) / std::tanh(2 * t) + x * y / s) / std::sqrt(2 * std::numbers::pi * s);
}

HeatKernelQuery query(double t, Point x, Point y, std::vector<double> a, std::vector<int> e) {
  return {t, std::move(x), std::move(y), MultiplicityIndex(std::move(a)), ParityVector(std::move(e))};
}

}  // namespace

TEST_CASE("Pi measure masses and the atomic limit") {
  for (double b : {-0.5, 0.0, 0.5, 2.0}) {
    PiMeasure pi({b});
    CHECK(pi.mass(0) == doctest::Approx(PiMeasure::exact_mass(b)).epsilon(1e-10));
  }
  PiMeasure atoms({-0.5});
  REQUIRE(atoms.axis(0).size() == 2);
  CHECK(atoms.axis(0).nodes[0] == -1.0);
  CHECK(atoms.axis(0).nodes[1] == 1.0);
  CHECK(atoms.axis(0).weights[0] == doctest::Approx(1.0 / std::sqrt(2 * std::numbers::pi)).epsilon(1e-15));
  // smooth test function against Pi_beta approaches the two-atom value as beta -> -1/2
  auto pair_with = [](const PiMeasure& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.axis(0).size(); ++i) s += p.axis(0).weights[i] * std::exp(p.axis(0).nodes[i]);
    return s;
  };
  const double limit = pair_with(atoms);
  double prev = 1.0;
  for (int k = 2; k <= 8; k += 2) {
    const double gap = std::abs(pair_with(PiMeasure({-0.5 + std::pow(10.0, -k)})) - limit);
    CHECK(gap < prev);
    CHECK(gap < 10.0 * std::pow(10.0, -k));
    prev = gap;
  }
  CHECK_THROWS(PiMeasure({-0.6}));
}

TEST_CASE("q_pm examples") {
  const Point x{1.0, 2.0};
  const auto aligned = q_pm(x, x, Point{1.0, 1.0});
  CHECK(aligned.minus == doctest::Approx(0.0).scale(1.0));
  CHECK(aligned.plus == doctest::Approx(20.0));
  const auto dec = q_pm(x, Point{0.5, 0.5}, Point{0.0, 0.0});
  CHECK(dec.plus == doctest::Approx(5.5));
  CHECK(dec.minus == doctest::Approx(5.5));
  const auto orth = q_pm(Point{1.0, 0.0}, Point{0.0, 1.0}, Point{0.5, 0.5});
  CHECK(orth.plus == doctest::Approx(2.0));
  CHECK(orth.minus == doctest::Approx(2.0));
  std::mt19937 gen(2);
  std::uniform_real_distribution<double> pos(0.0, 3.0), cube(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Point a{pos(gen), pos(gen)}, b{pos(gen), pos(gen)}, s{cube(gen), cube(gen)};
    const auto q = q_pm(a, b, s);
    const double d2 = (a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]);
    CHECK(q.minus >= -1e-14);
    CHECK(q.plus >= d2 - 1e-12);
  }
  CHECK_THROWS(q_pm(x, x, Point{1.5, 0.0}));
}

TEST_CASE("Bessel product form: Mehler oracle, symmetry, decay") {
  const MultiplicityIndex cl({-0.5});
  CHECK(heat_full(0.5, Point{1.0}, Point{1.0}, cl) == doctest::Approx(0.2318).epsilon(2e-4));
  for (double t : {0.05, 0.5, 2.0}) {
    for (double x : {0.3, 1.0, 2.5}) {
      for (double y : {0.2, 1.7}) {
        const double g0 = heat_component_bessel(query(t, {x}, {y}, {-0.5}, {0}));
        const double g1 = heat_component_bessel(query(t, {x}, {y}, {-0.5}, {1}));
        CHECK(std::abs(g0 + g1 - mehler(t, x, y)) <= 1e-12 * mehler(t, x, y));
        CHECK(heat_full(t, Point{-x}, Point{y}, cl) == doctest::Approx(mehler(t, -x, y)).epsilon(1e-10));
      }
    }
  }
  std::mt19937 gen(4);
  std::uniform_real_distribution<double> ud(0.1, 3.0);
  for (int i = 0; i < 50; ++i) {
    const Point x{ud(gen), ud(gen)}, y{ud(gen), ud(gen)};
    for (const auto& e : ParityVector::all(2)) {
      HeatKernelQuery q{ud(gen), x, y, MultiplicityIndex({0.7, 0.0}), e};
      const double v = heat_component_bessel(q);
      CHECK(v > 0.0);
      std::swap(q.x, q.y);
      CHECK(heat_component_bessel(q) == doctest::Approx(v).epsilon(1e-13));
    }
  }
  const double at10 = heat_component_bessel(query(10.0, {1.0}, {1.5}, {0.0}, {0}));
  CHECK(at10 > 0.0);
  CHECK(at10 < std::exp(-2.0 * 10.0) * 2.0);
  CHECK_THROWS(heat_component_bessel(query(0.0, {1.0}, {1.0}, {0.0}, {0})));
  CHECK_THROWS(heat_component_bessel(query(1.0, {0.0}, {1.0}, {0.0}, {0})));
}

TEST_CASE("Schlafli form agrees with the Bessel form") {
  for (int e : {0, 1}) {
    const auto q = query(0.3, {1.0}, {2.0}, {0.7}, {e});
    CHECK(heat_component_schlafli(q) == doctest::Approx(heat_component_bessel(q)).epsilon(1e-8));
  }
  // beta = -1/2 reduces to the two-atom rule
  const auto q = query(0.4, {0.6}, {1.1}, {-0.5}, {0});
  CHECK(heat_component_schlafli(q, PiMeasure({-0.5})) == doctest::Approx(heat_component_bessel(q)).epsilon(1e-13));
  // (xy)^eps prefactor: linear vanishing as x_i -> 0
  double prev_ratio = 0.0;
  for (double x = 1e-2; x > 1e-6; x *= 0.1) {
    const double ratio = heat_component_schlafli(query(0.5, {x}, {1.0}, {0.3}, {1})) / x;
    if (prev_ratio > 0.0) CHECK(ratio == doctest::Approx(prev_ratio).epsilon(1e-3));
    prev_ratio = ratio;
  }
}

TEST_CASE("series form converges to the closed form") {
  for (double t = 0.1; t <= 1.0 + 1e-12; t += 0.15) {
    for (int e : {0, 1}) {
      const auto q = query(t, {0.7}, {1.4}, {0.3}, {e});
      CHECK(heat_component_series(q, 60) == doctest::Approx(heat_component_bessel(q)).epsilon(1e-6));
    }
  }
  // large t: the lowest admissible term dominates
  const auto q = query(4.0, {0.8}, {1.2}, {0.0}, {0});
  const double lead = heat_component_series(q, 0);
  CHECK(std::abs(lead - heat_component_bessel(q)) / lead < 10.0 * std::exp(-2.0 * 4.0 * 2.0));
  // negative control: an odd summand breaks the even symmetry
  const MultiplicityIndex a({0.0});
  auto sum_with_extra = [&](double x) {
    return heat_full_series(1.0, Point{x}, Point{0.9}, a, 0) + std::exp(-eigenvalue(1, a)) * hermite_1d(1, 0.0, x) * hermite_1d(1, 0.0, 0.9);
  };
  CHECK(std::abs(sum_with_extra(0.5) - sum_with_extra(-0.5)) > 1e-3);
  CHECK(heat_component_series(query(1.0, {0.5}, {0.9}, {0.0}, {0}), 30) ==
        doctest::Approx(heat_component_bessel(query(1.0, {0.5}, {0.9}, {0.0}, {0}))).epsilon(1e-10));
}

TEST_CASE("three-way agreement grid") {
  const std::vector<double> coords{0.2, 0.9, 1.8, 3.0};
  double worst_series = 0.0, worst_schlafli = 0.0;
  for (double t : {0.1, 0.3, 1.0}) {
    const int cutoff = heat_series_cutoff(t, 1, 1e-14);
    for (double a : {-0.5, 0.0, 0.7}) {
      for (int e : {0, 1}) {
        for (double x : coords) {
          for (double y : coords) {
            const auto q = query(t, {x}, {y}, {a}, {e});
            const double b = heat_component_bessel(q);
            worst_series = std::max(worst_series, std::abs(heat_component_series(q, cutoff) - b) / b);
            worst_schlafli = std::max(worst_schlafli, std::abs(heat_component_schlafli(q) - b) / b);
          }
        }
      }
    }
  }
  MESSAGE("d=1 worst rel: series " << worst_series << " schlafli " << worst_schlafli);
  CHECK(worst_series < 1e-6);
  CHECK(worst_schlafli < 1e-6);
}

TEST_CASE("factored series in two dimensions") {
  const MultiplicityIndex alpha({0.7, 0.0});
  // moderate values: the simplex and box truncations agree
  for (const auto& e : ParityVector::all(2)) {
    const HeatKernelQuery q{0.5, {0.6, 1.1}, {0.9, 0.4}, alpha, e};
    CHECK(heat_component_series_factored(q, 60) == doctest::Approx(heat_component_series(q, 60)).epsilon(1e-12));
  }
  // tiny values at far-apart corners keep their relative accuracy
  const std::vector<double> coords{0.2, 0.9, 1.8, 3.0};
  double worst = 0.0;
  for (double t : {0.1, 0.3, 1.0}) {
    const int cutoff = heat_series_cutoff(t, 1, 1e-22);
    for (const auto& e : ParityVector::all(2)) {
      for (double x1 : coords) {
        for (double x2 : coords) {
          for (double y1 : coords) {
            for (double y2 : coords) {
              const HeatKernelQuery q{t, {x1, x2}, {y1, y2}, alpha, e};
              const double b = heat_component_bessel(q);
              worst = std::max(worst, std::abs(heat_component_series_factored(q, cutoff) - b) / b);
            }
          }
        }
      }
    }
  }
  MESSAGE("d=2 worst rel (factored series) " << worst);
  CHECK(worst < 1e-6);
}

TEST_CASE("decomposition over eps equals the unrestricted series") {
  const MultiplicityIndex alpha({0.7, 0.0});
  for (double t : {0.3, 1.0}) {
    const int cutoff = heat_series_cutoff(t, 2, 1e-15);
    for (const Point& x : {Point{0.4, 1.2}, Point{-0.8, 0.3}}) {
      const Point y{1.1, -0.6};
      const double full = heat_full(t, x, y, alpha);
      CHECK(std::abs(full - heat_full_series(t, x, y, alpha, cutoff)) < 1e-8);
    }
    const Point x{0.4, 1.2}, y{1.1, 0.6};
    double sum = 0.0;
    for (const auto& e : ParityVector::all(2)) sum += heat_component_bessel({t, x, y, alpha, e});
    CHECK(sum == doctest::Approx(heat_full(t, x, y, alpha)).epsilon(1e-14));
  }
}

TEST_CASE("semigroup property by quadrature") {
  const MultiplicityIndex a1({0.7});
  const Point x{0.5}, y{-1.2};
  CHECK(heat_semigroup_integral(0.3, 0.4, x, y, a1) == doctest::Approx(heat_full(0.7, x, y, a1)).epsilon(1e-4));
  const MultiplicityIndex a2({0.0, -0.5});
  const Point x2{0.5, 1.0}, y2{1.3, -0.4};
  CHECK(heat_semigroup_integral(0.5, 0.25, x2, y2, a2, 60) ==
        doctest::Approx(heat_full(0.75, x2, y2, a2)).epsilon(1e-4));
}

TEST_CASE("closed-form derivatives against finite differences") {
  std::mt19937 gen(8);
  std::uniform_real_distribution<double> ud(0.2, 2.5), ut(0.1, 1.5);
  for (int i = 0; i < 30; ++i) {
    const double a0 = (i % 3 == 0) ? -0.5 : ud(gen) - 0.2;
    HeatKernelQuery q{ut(gen), {ud(gen), ud(gen)}, {ud(gen), ud(gen)}, MultiplicityIndex({a0, 0.3}),
                      ParityVector({i % 2, (i / 2) % 2})};
    const auto dv = heat_component_derivatives(q);
    CHECK(dv.value == doctest::Approx(heat_component_bessel(q)).epsilon(1e-14));
    const double h = 1e-5;
    auto at = [&](double dt, std::size_t j, double dx) {
      HeatKernelQuery r = q;
      r.t += dt;
      r.x[j] += dx;
      return heat_component_bessel(r);
    };
    const double fd_t = (at(h, 0, 0) - at(-h, 0, 0)) / (2 * h);
    CHECK(std::abs(dv.dt - fd_t) <= 1e-6 * std::abs(dv.dt) + 1e-10 * dv.value);
    for (std::size_t j = 0; j < 2; ++j) {
      const double fd_x = (at(0, j, h) - at(0, j, -h)) / (2 * h);
      CHECK(std::abs(dv.grad_x[j] - fd_x) <= 1e-6 * std::abs(dv.grad_x[j]) + 1e-10 * dv.value);
      const double fd_xt = (heat_component_derivatives([&] { auto r = q; r.x[j] += h; return r; }()).dt -
                            heat_component_derivatives([&] { auto r = q; r.x[j] -= h; return r; }()).dt) /
                           (2 * h);
      CHECK(std::abs(dv.grad_x_dt[j] - fd_xt) <= 1e-6 * std::abs(dv.grad_x_dt[j]) + 1e-9 * std::abs(dv.dt) + 1e-10 * dv.value);
    }
    // d/dx_j G(x,y) = d/dy_j G(y,x)
    HeatKernelQuery sw = q;
    std::swap(sw.x, sw.y);
    const double hy = 1e-5;
    auto at_y = [&](double dy) {
      HeatKernelQuery r = sw;
      r.y[0] += dy;
      return heat_component_bessel(r);
    };
    CHECK(dv.grad_x[0] == doctest::Approx((at_y(hy) - at_y(-hy)) / (2 * hy)).epsilon(1e-6).scale(1e-10 * dv.value));
  }
  // Mehler time derivative from the closed form
  const double t = 0.45, x = 0.7, y = 1.3;
  const double s = std::sinh(2 * t), c = std::cosh(2 * t);
  const double dmehler = mehler(t, x, y) *
                         (-c / s + (x * x + y * y) / (s * s) - 2 * x * y * c / (s * s));
  const double dsum = heat_component_derivatives(query(t, {x}, {y}, {-0.5}, {0})).dt +
                      heat_component_derivatives(query(t, {x}, {y}, {-0.5}, {1})).dt;
  CHECK(dsum == doctest::Approx(dmehler).epsilon(1e-12));
}

TEST_CASE("Poisson subordination") {
  // scalar identity int_0^inf e^{-a^2/(4u) - u} / sqrt(pi u) du = e^{-a}
  for (double a : {0.1, 1.0, 5.0}) {
    const auto r = quad::integrate(
        [a](double v) {
          const double u = std::exp(v);
          return std::exp(-a * a / (4 * u) - u + 0.5 * v) / std::sqrt(std::numbers::pi);
        },
        {-30.0, std::log(a * a / 4), 0.0, 7.0});
    CHECK(r.value == doctest::Approx(std::exp(-a)).epsilon(1e-11));
  }
  const MultiplicityIndex alpha({0.7});
  for (double t : {0.3, 1.0, 2.0}) {
    for (int e : {0, 1}) {
      const ParityVector eps({e});
      const Point x{0.8}, y{1.5};
      const double sub = poisson_component(t, x, y, alpha, eps);
      const double ser = poisson_component_series(t, x, y, alpha, eps, 4000);
      CHECK(sub > 0.0);
      CHECK(sub == doctest::Approx(ser).epsilon(1e-5));
    }
  }
  double prev = std::numeric_limits<double>::infinity();
  for (double t = 1.0; t < 8.0; t += 0.5) {
    const double v = poisson_component(t, Point{1.0}, Point{1.0}, alpha, ParityVector({0}));
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS(poisson_component(0.0, Point{1.0}, Point{1.0}, alpha, ParityVector({0})));
}
