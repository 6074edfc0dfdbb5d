#include "doctest.h"

#include "dunkl/expression.hpp"
#include "dunkl/heat_kernel.hpp"
#include "dunkl/multipliers.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace dunkl;

namespace {

double bump(double u) { return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0; }

// random smooth function with Gaussian decay
Function random_function(std::mt19937& gen, std::size_t d) {
  std::normal_distribution<double> nd;
  std::vector<double> c(d), w(d);
  for (std::size_t j = 0; j < d; ++j) {
    c[j] = 0.7 * nd(gen);
    w[j] = nd(gen);
  }
  const Complex amp(nd(gen), nd(gen));
  return [=](std::span<const double> x) {
    double r = 0.0, lin = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      r += (x[j] - c[j]) * (x[j] - c[j]);
      lin += w[j] * x[j];
    }
    return amp * std::exp(Complex(-0.6 * r, 0.4 * lin));
  };
}

double norm(const SpectralCoefficients& c) { return coefficient_norm(c); }

}  // namespace

TEST_CASE("expression parser") {
  CHECK(std::abs(expr::parse("exp(-t)")(2.0) - std::exp(-2.0)) < 1e-15);
  CHECK(std::abs(expr::parse("2*t^2 - 3/t + pi")(2.0) - (8.0 - 1.5 + std::numbers::pi)) < 1e-14);
  CHECK(std::abs(expr::parse("-2^2")(0.0) + 4.0) < 1e-15);
  CHECK(std::abs(expr::parse("2^3^2")(0.0) - 512.0) < 1e-12);
  CHECK(std::abs(expr::parse("t^i")(std::numbers::e) - std::exp(Complex(0.0, 1.0))) < 1e-15);
  CHECK(std::abs(expr::parse("abs(sin(t)) * gamma(3)")(-1.0) - 2.0 * std::sin(1.0)) < 1e-12);
  CHECK(std::abs(expr::parse_constant("1 + 2*i") - Complex(1.0, 2.0)) < 1e-15);
  CHECK_THROWS_AS(expr::parse("exp(t"), std::invalid_argument);
  CHECK_THROWS_AS(expr::parse("foo(t)"), std::invalid_argument);
  CHECK_THROWS_AS(expr::parse("t t"), std::invalid_argument);
  CHECK_THROWS_AS(expr::parse_constant("t + 1"), std::invalid_argument);
}

TEST_CASE("Laplace symbol oracles") {
  const Symbol id = make_symbol("identity");
  const Symbol ex = make_symbol("laplace-eta:exp(-t)");
  const Symbol ip = make_symbol("imaginary-power:1");
  for (double z : {0.3, 1.0, 7.5, 120.0, 2e3}) {
    CHECK(std::abs(id(z) - 1.0) < 1e-10);
    CHECK(std::abs(ex(z) - z / (z + 1.0)) < 1e-10);
    const Complex exact = std::exp(Complex(0.0, -std::log(z)));
    CHECK(std::abs(ip(z) - exact) < 1e-9);
    CHECK(std::abs(ip(z)) == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK_THROWS(laplace_symbol_eval(std::get<LaplaceSymbol>(id.data), 0.0));
  // the declared bound is enforced on samples
  LaplaceSymbol bad;
  bad.eta = [](double t) { return Complex(std::sin(t) * 3.0); };
  bad.eta_bound = 1.0;
  CHECK_THROWS(check_eta_bound(bad));
}

TEST_CASE("Laplace-Stieltjes symbol oracles") {
  const Symbol heat = make_symbol("heat:0.4");
  const Symbol frac = make_symbol("fractional:0.5");
  for (double z : {0.5, 2.0, 31.0, 400.0}) {
    CHECK(std::abs(heat(z) - std::exp(-0.4 * z)) < 1e-15);
    CHECK(std::abs(frac(z) - 1.0 / std::sqrt(z)) < 1e-10 / std::sqrt(z));
  }
  const Symbol atoms = make_symbol("stieltjes-atoms:0.5=1,1.2=-0.3+0.1*i");
  CHECK(std::abs(atoms(2.0) - (std::exp(-1.0) + Complex(-0.3, 0.1) * std::exp(-2.4))) < 1e-15);

  const double l0 = eigenvalue(0, MultiplicityIndex({0.0}));
  StieltjesSymbol bad;
  bad.densities.push_back({[l0](double t) { return Complex(std::exp(2.0 * t * l0)); }});
  CHECK_THROWS_AS(meas_integral(bad, l0), InvalidSymbol);
  CHECK_THROWS_AS(stieltjes_symbol_eval(bad, l0), InvalidSymbol);
  const Symbol bad_sym{"bad", bad, false};
  CHECK_THROWS_AS(symbol_on_spectrum(bad_sym, MultiplicityIndex({0.0}), 3), InvalidSymbol);
  StieltjesSymbol zero;
  CHECK(stieltjes_symbol_eval(zero, 1.0) == Complex(0.0));
  CHECK(meas_integral(std::get<StieltjesSymbol>(frac.data), 2.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("registry errors") {
  CHECK_THROWS_AS(make_symbol("nope"), std::invalid_argument);
  CHECK_THROWS_AS(make_symbol("heat"), std::invalid_argument);
  CHECK_THROWS_AS(make_symbol("heat:-1"), std::invalid_argument);
  CHECK_THROWS_AS(make_symbol("heat:abc"), std::invalid_argument);
  CHECK_THROWS_AS(make_symbol("fractional:0"), std::invalid_argument);
  CHECK_THROWS_AS(make_symbol("stieltjes-atoms:0.5"), std::invalid_argument);
  CHECK_THROWS_AS(make_symbol("laplace-eta:log(0*t)"), std::invalid_argument);
  CHECK(make_symbol("poisson:1").provenance() == Provenance::sqrt_stieltjes);
  CHECK(make_symbol("identity").provenance() == Provenance::laplace);
}

TEST_CASE("symbols on the spectrum") {
  const MultiplicityIndex alpha({0.7, 0.0});
  const auto ip = symbol_on_spectrum(make_symbol("imaginary-power:1"), alpha, 60);
  const auto fr = symbol_on_spectrum(make_symbol("fractional:0.5"), alpha, 60);
  const auto id = symbol_on_spectrum(make_symbol("identity"), alpha, 60);
  const double bound = std::get<LaplaceSymbol>(make_symbol("imaginary-power:1").data).eta_bound;
  for (int n = 0; n <= 60; ++n) {
    const double lam = eigenvalue(n, alpha);
    CHECK(std::abs(ip.at(n) - std::exp(Complex(0.0, -std::log(lam)))) < 1e-8);
    CHECK(std::abs(fr.at(n) - std::pow(lam, -0.5)) < 1e-8 * std::pow(lam, -0.5));
    CHECK(std::abs(id.at(n) - 1.0) < 1e-10);
    CHECK(std::abs(ip.at(n)) <= bound * (1.0 + 1e-8));
    if (n > 0) CHECK(std::abs(fr.at(n)) <= std::abs(fr.at(n - 1)));
  }
}

TEST_CASE("multiplier operators on the full space") {
  std::mt19937 gen(21);
  const MultiplicityIndex alpha({0.7, -0.5});
  const int N = 12;
  for (int trial = 0; trial < 3; ++trial) {
    const Function f = random_function(gen, 2);
    const auto c = expand(f, alpha, N, Domain::full);
    const auto same = apply_multiplier(make_symbol("identity"), f, alpha, N);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(same.values[i] - c.values[i]) < 1e-10);
    const auto rot = apply_multiplier(make_symbol("imaginary-power:1"), f, alpha, N);
    CHECK(std::abs(norm(rot) - norm(c)) < 1e-10);
    const auto heat = apply_multiplier(make_symbol("heat:0.3"), f, alpha, N);
    CHECK(norm(heat) <= norm(c) + 1e-10);
    // z^{-0.2} then z^{-0.3} equals z^{-0.5}
    const auto once = apply_multiplier(make_symbol("fractional:0.5"), f, alpha, N);
    const auto twice = apply_on_coefficients(symbol_on_spectrum(make_symbol("fractional:0.3"), alpha, N),
                                             apply_multiplier(make_symbol("fractional:0.2"), f, alpha, N));
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(once.values[i] - twice.values[i]) < 1e-9);
  }
}

TEST_CASE("heat multiplier equals integration against the heat kernel") {
  const MultiplicityIndex alpha({0.7});
  const double t = 0.3;
  const Function f = [](std::span<const double> x) { return Complex(bump(x[0] / 1.5) * (1.0 + x[0])); };
  const auto quad_rule = box_expansion_quadrature(alpha, Point{0.0}, Point{1.5}, 200);
  auto c = expand(f, alpha, 60, Domain::full, quad_rule);
  c = apply_on_coefficients(symbol_on_spectrum(make_symbol("heat:0.3"), alpha, 60), c);
  const auto& r = quad_rule.axes[0];
  for (double x : {-1.2, -0.3, 0.4, 1.1, 2.0}) {
    double direct = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      for (double s : {1.0, -1.0}) {
        const Point y{s * r.nodes[i]};
        direct += r.weights[i] * heat_full(t, Point{x}, y, alpha) * f(y).real();
      }
    }
    CHECK(synthesize(c, Point{x}).real() == doctest::Approx(direct).epsilon(1e-4));
  }
}

TEST_CASE("component operators and reconstruction") {
  std::mt19937 gen(5);
  for (std::size_t d = 1; d <= 2; ++d) {
    const MultiplicityIndex alpha = MultiplicityIndex::uniform(d, d == 1 ? 0.7 : 0.0);
    const double scale = std::pow(2.0, static_cast<double>(d));
    for (const char* name : {"heat:0.2", "imaginary-power:1", "fractional:0.5"}) {
      const Symbol sym = make_symbol(name);
      const Function f = random_function(gen, d);
      const auto whole = apply_multiplier(sym, f, alpha, 12);
      std::vector<SpectralCoefficients> parts;
      for (const auto& e : ParityVector::all(d)) parts.push_back(apply_multiplier_component(sym, e, epsilon_projection(f, e), alpha, 12));
      std::uniform_real_distribution<double> ud(-2.0, 2.0);
      for (int p = 0; p < 5; ++p) {
        Point x(d);
        for (double& v : x) v = ud(gen);
        Complex sum = 0.0;
        for (const auto& part : parts) sum += scale * synthesize(part, x);
        CHECK(std::abs(sum - synthesize(whole, x)) < 1e-10);
      }
    }
  }
  // wrong parity gives zero; unit symbol on h_k gives 2^{-d}
  const MultiplicityIndex alpha({0.3, 1.0});
  const MultiIndex k({2, 1});
  const Function hk = [&](std::span<const double> x) { return Complex(hermite_nd(k, alpha, x)); };
  const Function odd_even = epsilon_projection(random_function(gen, 2), ParityVector({1, 0}));
  const auto wrong = apply_multiplier_component(make_symbol("heat:0.1"), ParityVector({0, 0}),
                                                epsilon_projection(odd_even, ParityVector({0, 0})), alpha, 8);
  for (const Complex& v : wrong.values) CHECK(std::abs(v) < 1e-10);
  const auto full = apply_multiplier(make_symbol("heat:0.1"), odd_even, alpha, 8);
  for (std::size_t i = 0; i < full.size(); ++i) {
    if (!in_parity_class(full.indices[i], ParityVector({1, 0}))) CHECK(std::abs(full.values[i]) < 1e-10);
  }
  const auto right = apply_multiplier_component(make_symbol("identity"), ParityVector({0, 1}), hk, alpha, 8);
  CHECK(std::abs(right.at(k) - 0.25) < 1e-10);
}

TEST_CASE("square-root multipliers") {
  const MultiplicityIndex alpha({0.7});
  std::mt19937 gen(13);
  const Function f = random_function(gen, 1);
  const auto c = expand(f, alpha, 20, Domain::full);
  const auto same = apply_sqrt_multiplier(make_symbol("identity"), f, alpha, 20);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(same.values[i] - c.values[i]) < 1e-10);
  const auto rot = apply_sqrt_multiplier(make_symbol("imaginary-power:2"), f, alpha, 20);
  CHECK(std::abs(norm(rot) - norm(c)) < 1e-10);
  StieltjesSymbol bad;
  bad.densities.push_back({[](double t) { return Complex(std::exp(3.0 * t)); }});
  CHECK_THROWS_AS(apply_sqrt_multiplier(Symbol{"bad", bad, false}, f, alpha, 4), InvalidSymbol);

  // Poisson semigroup against the subordinated kernel, one component at a time
  const double t = 1.5;
  Symbol poisson = make_symbol("heat:1.5");
  poisson.sqrt = true;
  const Function g = [](std::span<const double> x) { return Complex(bump((x[0] - 0.9) / 0.6)); };
  const auto q = box_expansion_quadrature(alpha, Point{0.3}, Point{1.5}, 120);
  for (int e : {0, 1}) {
    const ParityVector eps({e});
    const auto cc = apply_multiplier_component(poisson, eps, g, alpha, 400, q);
    for (double x : {0.5, 1.7}) {
      double direct = 0.0;
      for (std::size_t i = 0; i < q.axes[0].size(); ++i) {
        const Point y{q.axes[0].nodes[i]};
        direct += q.axes[0].weights[i] * poisson_component(t, Point{x}, y, alpha, eps, 1e-10) * g(y).real();
      }
      CHECK(synthesize(cc, Point{x}).real() == doctest::Approx(direct).epsilon(1e-4));
    }
  }
}

TEST_CASE("Laguerre functions of convolution type") {
  const MultiplicityIndex a1({0.7});
  for (int n = 0; n <= 8; ++n) {
    for (int m = n; m <= 8; ++m) {
      auto f = [&](double x) {
        return laguerre_function(MultiIndex({n}), a1, Point{x}) * laguerre_function(MultiIndex({m}), a1, Point{x}) *
               std::pow(x, 2 * 0.7 + 1);
      };
      const double ip = quad::integrate(f, {0.0, 1.0, 3.0, 6.0, 12.0}, {.abs_tol = 1e-15, .rel_tol = 1e-13}).value;
      CHECK(std::abs(ip - (n == m ? 1.0 : 0.0)) < 1e-10);
    }
  }
  const MultiplicityIndex alpha({0.7, 0.0});
  std::mt19937 gen(17);
  const Function f = random_function(gen, 2);
  for (const char* name : {"identity", "heat:0.5", "fractional:0.5", "imaginary-power:1"}) {
    const Symbol sym = make_symbol(name);
    const auto lag = apply_laguerre_multiplier(sym, f, alpha, 6);
    const auto comp = apply_multiplier_component(sym, ParityVector::zero(2), f, alpha, 12);
    for (const Point& x : {Point{0.3, 0.4}, Point{1.2, 0.1}, Point{2.0, 1.7}}) {
      CHECK(std::abs(synthesize(lag, x) - 4.0 * synthesize(comp, x)) < 1e-10);
    }
  }
  // unit symbol reproduces elements of span{l_k}
  const MultiIndex k({1, 2});
  const Function lk = [&](std::span<const double> x) { return Complex(laguerre_function(k, alpha, x)); };
  const auto id = apply_laguerre_multiplier(make_symbol("identity"), lk, alpha, 6);
  for (std::size_t i = 0; i < id.indices.size(); ++i) {
    CHECK(std::abs(id.values[i] - (id.indices[i] == k ? 1.0 : 0.0)) < 1e-10);
  }
  CHECK(heat_tail_weight(1.0, alpha, 10) == doctest::Approx(std::exp(-eigenvalue(11, alpha))));
}
