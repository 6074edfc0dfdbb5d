#include "doctest.h"

#include "dunkl/quadrature.hpp"
#include "dunkl/special.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <numbers>

using namespace dunkl;

namespace {

// explicit sum L_k^a(u) = sum_i (-1)^i binom(k+a, k-i) u^i / i!
double laguerre_explicit(int k, double a, double u) {
  double s = 0.0;
  for (int i = 0; i <= k; ++i) {
    const double binom = std::exp(std::lgamma(k + a + 1.0) - std::lgamma(k - i + 1.0) - std::lgamma(a + i + 1.0));
    s += ((i % 2) ? -1.0 : 1.0) * binom * std::pow(u, i) / std::tgamma(i + 1.0);
  }
  return s;
}

}  // namespace

TEST_CASE("Laguerre recurrence against the explicit sum") {
  CHECK(special::laguerre(0, 0.3, 5.0) == 1.0);
  CHECK(special::laguerre(1, 0.7, 2.0) == doctest::Approx(1.0 + 0.7 - 2.0).epsilon(1e-15));
  CHECK(special::laguerre(2, 0.0, 2.0) == doctest::Approx(-1.0).epsilon(1e-15));
  for (double a : {-0.5, 0.0, 0.7, 2.0}) {
    for (int k = 0; k <= 10; ++k) {
      for (double u : {0.0, 0.3, 1.7, 4.0}) {
        CHECK(special::laguerre(k, a, u) == doctest::Approx(laguerre_explicit(k, a, u)).epsilon(1e-11).scale(1.0));
        const double c = std::exp(0.5 * (std::lgamma(k + 1.0) - std::lgamma(k + a + 1.0)));
        CHECK(special::laguerre_normalized(k, a, u) ==
              doctest::Approx(c * special::laguerre(k, a, u)).epsilon(1e-12).scale(1.0));
      }
    }
  }
  CHECK_THROWS(special::laguerre(2, -1.0, 1.0));
}

TEST_CASE("half-integer Bessel closed forms") {
  const double s = std::sqrt(2.0 / std::numbers::pi);
  CHECK(special::bessel_i(-0.5, 1.0) == doctest::Approx(s * std::cosh(1.0)).epsilon(1e-14));
  CHECK(special::bessel_i(0.5, 1.0) == doctest::Approx(s * std::sinh(1.0)).epsilon(1e-14));
  CHECK(special::bessel_i(-0.5, 1.0) == doctest::Approx(1.23120).epsilon(1e-5));
  CHECK(special::bessel_i(0.5, 1.0) == doctest::Approx(0.93767).epsilon(1e-5));
  for (double z : {1e-3, 0.5, 7.0, 29.0, 31.0, 100.0, 600.0}) {
    CHECK(special::bessel_i(-0.5, z) == doctest::Approx(s * std::cosh(z) / std::sqrt(z)).epsilon(1e-12));
    CHECK(special::bessel_i(0.5, z) == doctest::Approx(s * std::sinh(z) / std::sqrt(z)).epsilon(1e-12));
  }
}

TEST_CASE("Bessel I against an independent library") {
  for (double nu : {-0.5, 0.0, 0.3, 0.7, 1.5, 2.7, 10.0, 40.0}) {
    for (double z = 1e-3; z < 650.0; z *= 1.7) {
      const double ref = boost::math::cyl_bessel_i(nu, z);
      if (!(ref > 1e-290)) continue;
      CHECK(special::bessel_i(nu, z) == doctest::Approx(ref).epsilon(1e-10));
      CHECK(special::bessel_i_over_power(nu, z) == doctest::Approx(ref / std::pow(z, nu)).epsilon(1e-10));
    }
  }
}

TEST_CASE("Bessel ratio forms") {
  for (double nu : {-0.5, 0.0, 1.2, 3.0}) {
    CHECK(special::bessel_i_over_power(nu, 0.0) ==
          doctest::Approx(std::pow(2.0, -nu) / std::tgamma(nu + 1.0)).epsilon(1e-14));
    CHECK(special::bessel_i_ratio_over_z(nu, 0.0) == doctest::Approx(0.5 / (nu + 1.0)).epsilon(1e-14));
    for (double z : {0.2, 5.0, 80.0}) {
      CHECK(special::bessel_i_ratio_over_z(nu, z) ==
            doctest::Approx(boost::math::cyl_bessel_i(nu + 1.0, z) / (z * boost::math::cyl_bessel_i(nu, z)))
                .epsilon(1e-10));
      CHECK(special::bessel_i_over_power_scaled(nu, z) ==
            doctest::Approx(std::exp(-z) * boost::math::cyl_bessel_i(nu, z) / std::pow(z, nu)).epsilon(1e-10));
    }
  }
  for (double nu : {-0.5, 0.0, 1.2, 3.0, 8.0}) {
    for (double z : {0.2, 5.0, 29.0, 31.0, 80.0, 300.0, 650.0}) {
      const double i0 = boost::math::cyl_bessel_i(nu, z);
      const double ref = (i0 - boost::math::cyl_bessel_i(nu + 1.0, z)) / i0;
      CHECK(special::bessel_i_ratio_complement(nu, z) == doctest::Approx(ref).epsilon(1e-9));
    }
    // leading behaviour (2 nu + 1) / (2 z) where the plain ratio has lost all digits of 1 - rho
    const double z = 1e7;
    CHECK(special::bessel_i_ratio_complement(nu, z) == doctest::Approx((2.0 * nu + 1.0) / (2.0 * z)).epsilon(1e-6));
  }
  // very large arguments stay finite in log form
  CHECK(std::isfinite(special::log_bessel_i_over_power(0.7, 1e5)));
  CHECK_THROWS(special::bessel_i(-0.6, 1.0));
  CHECK_THROWS(special::bessel_i(0.0, -1.0));
  CHECK_THROWS(special::bessel_i_over_power(0.0, -1.0));
}

TEST_CASE("complex Gamma") {
  CHECK(std::abs(special::tgamma({0.5, 0.0}) - std::sqrt(std::numbers::pi)) < 1e-13);
  CHECK(std::abs(special::tgamma({5.0, 0.0}) - 24.0) < 1e-11);
  const double mod2 = std::norm(special::tgamma({1.0, 1.0}));
  CHECK(mod2 == doctest::Approx(std::numbers::pi / std::sinh(std::numbers::pi)).epsilon(1e-13));
  for (double x : {0.1, 0.9, 3.3, 12.0}) {
    CHECK(special::lgamma({x, 0.0}).real() == doctest::Approx(std::lgamma(x)).epsilon(1e-12));
  }
  // recurrence Gamma(z+1) = z Gamma(z) off the real axis
  const std::complex<double> z(0.3, -1.7);
  CHECK(std::abs(special::tgamma(z + 1.0) - z * special::tgamma(z)) < 1e-13 * std::abs(special::tgamma(z + 1.0)));
}

TEST_CASE("Gauss-Jacobi and Legendre rules integrate polynomials exactly") {
  for (double a : {-0.5, 0.0, 0.7, 2.0}) {
    const auto r = quad::gauss_jacobi(20, a, a);
    // moments of (1-s^2)^a: int s^{2m} = B(m+1/2, a+1)
    for (int m = 0; m < 10; ++m) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 2 * m);
      const double exact = std::exp(std::lgamma(m + 0.5) + std::lgamma(a + 1.0) - std::lgamma(m + a + 1.5));
      CHECK(s == doctest::Approx(exact).epsilon(1e-12));
    }
  }
  const auto g = quad::gauss_legendre(8, 1.0, 3.0);
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], 15);
  CHECK(s == doctest::Approx((std::pow(3.0, 16) - 1.0) / 16.0).epsilon(1e-13));
}

TEST_CASE("generalized Gauss-Laguerre and half-line rules") {
  for (double a : {-0.5, 0.0, 1.4}) {
    const auto r = quad::gauss_laguerre(40, a);
    for (int m = 0; m < 30; m += 3) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], m);
      CHECK(s == doctest::Approx(std::tgamma(m + a + 1.0)).epsilon(1e-11));
    }
    // int_0^inf e^{-x^2} x^{2a+1} dx = Gamma(a+1)/2
    const auto h = quad::half_line_rule(30, a);
    double t = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) t += h.weights[i] * std::exp(-h.nodes[i] * h.nodes[i]);
    CHECK(t == doctest::Approx(0.5 * std::tgamma(a + 1.0)).epsilon(1e-12));
    // interval rule with the weight absorbed at zero
    const auto iv = quad::interval_rule(20, a, 0.0, 2.0);
    double v = 0.0;
    for (std::size_t i = 0; i < iv.size(); ++i) v += iv.weights[i] * iv.nodes[i] * iv.nodes[i];
    CHECK(v == doctest::Approx(std::pow(2.0, 2 * a + 4) / (2 * a + 4)).epsilon(1e-12));
  }
  // large rules: weights may underflow but the scaled form stays representable
  const auto big = quad::gauss_laguerre(200, 0.3);
  for (std::size_t i = 0; i < big.nodes.size(); ++i) {
    CHECK(big.weights[i] >= 0.0);
    CHECK(big.scaled_weights[i] > 0.0);
  }
}

TEST_CASE("adaptive Gauss-Kronrod driver") {
  const auto r = quad::integrate([](double x) { return std::exp(-x) * std::cos(3 * x); }, {0.0, 40.0});
  CHECK(r.value == doctest::Approx(1.0 / 10.0).epsilon(1e-11));
  const auto c = quad::integrate([](double x) { return std::complex<double>(std::sqrt(x), x * x); }, {0.0, 1.0});
  CHECK(std::abs(c.value - std::complex<double>(2.0 / 3.0, 1.0 / 3.0)) < 1e-10);
  const auto v = quad::integrate(
      [](double x) { return std::vector<double>{x, 1.0 / (1.0 + x * x)}; }, {-1.0, 0.0, 1.0});
  CHECK(v.value[0] == doctest::Approx(0.0).scale(1.0));
  CHECK(v.value[1] == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
  // breakpoint order does not matter
  auto f = [](double x) { return std::log(x); };
  CHECK(quad::integrate(f, {2.0, 0.0, 1.0}).value == quad::integrate(f, {0.0, 1.0, 2.0}).value);
}
