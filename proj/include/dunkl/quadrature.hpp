#ifndef DUNKL_QUADRATURE_HPP
#define DUNKL_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <vector>

namespace dunkl::quad {

/// Nodes and weights of a fixed quadrature rule.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Jacobi rule for the weight (1-s)^a (1+s)^b on [-1,1], a, b > -1 (Golub-Welsch).
Rule gauss_jacobi(int n, double a, double b);

/// Gauss-Legendre rule on [lo, hi].
Rule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

/// Generalized Gauss-Laguerre rule for u^a e^{-u} on (0, inf). Nodes are Newton-polished and
/// the weights come from the closed form, so tiny weights keep full relative accuracy.
struct LaguerreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  /// weights[i] * exp(nodes[i]), i.e. the rule for the plain weight u^a
  std::vector<double> scaled_weights;
};
LaguerreRule gauss_laguerre(int n, double a);

/// Rule for int_0^inf F(x) x^{2a+1} dx on the half line, exact for F(x) = e^{-x^2} p(x^2)
/// with deg p <= 2n-1.
Rule half_line_rule(int n, double a);

/// Rule for int_lo^hi F(x) x^{2a+1} dx with 0 <= lo < hi. Endpoint weight is absorbed
/// (Gauss-Jacobi) when lo == 0.
Rule interval_rule(int n, double a, double lo, double hi);

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(std::complex<double> v) { return std::abs(v); }
template <class T>
double magnitude(const std::vector<T>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, magnitude(x));
  return m;
}

inline double axpy(double a, double x, double y) { return a * x + y; }
inline std::complex<double> axpy(double a, std::complex<double> x, std::complex<double> y) {
  return a * x + y;
}
template <class T>
std::vector<T> axpy(double a, const std::vector<T>& x, std::vector<T> y) {
  if (y.empty()) y.assign(x.size(), T{});
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = axpy(a, x[i], y[i]);
  return y;
}

inline double diff(double a, double b) { return a - b; }
inline std::complex<double> diff(std::complex<double> a, std::complex<double> b) { return a - b; }
template <class T>
std::vector<T> diff(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = diff(a[i], b[i]);
  return out;
}

template <class T>
T zero_like(const T& v) {
  if constexpr (std::is_arithmetic_v<T>) {
    return T{0};
  } else if constexpr (std::is_same_v<T, std::complex<double>>) {
    return T{0.0, 0.0};
  } else {
    return T(v.size(), typename T::value_type{});
  }
}

const std::array<double, 8>& kronrod_nodes();
const std::array<double, 8>& kronrod_weights();
const std::array<double, 4>& gauss7_weights();

}  // namespace detail

/// Options for the adaptive Gauss-Kronrod (7/15) driver.
struct AdaptiveOptions {
  double abs_tol = 0.0;
  double rel_tol = 1e-11;
  int max_intervals = 4000;
};

template <class T>
struct AdaptiveResult {
  T value;
  double error;
  int intervals;
};

/// Globally adaptive G7/K15 quadrature of a scalar-, complex- or vector-valued integrand over
/// [a, b] split at the given breakpoints. Subintervals are always summed in left-to-right order
/// so the result is independent of the refinement history.
template <class F>
auto integrate(F&& f, std::vector<double> breakpoints, const AdaptiveOptions& opt = {}) {
  using T = std::decay_t<decltype(f(0.0))>;
  if (breakpoints.size() < 2) throw std::invalid_argument("integrate: need at least two points");
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

  const auto& xk = detail::kronrod_nodes();
  const auto& wk = detail::kronrod_weights();
  const auto& wg = detail::gauss7_weights();

  struct Panel {
    double a, b;
    T value;
    double error;
  };
  auto evaluate = [&](double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T fc = f(c);
    T kron = detail::axpy(wk[7], fc, detail::zero_like(fc));
    T gauss = detail::axpy(wg[3], fc, detail::zero_like(fc));
    for (int i = 0; i < 7; ++i) {
      T f1 = f(c - h * xk[i]);
      T f2 = f(c + h * xk[i]);
      kron = detail::axpy(wk[i], f1, std::move(kron));
      kron = detail::axpy(wk[i], f2, std::move(kron));
      if (i % 2 == 1) {
        gauss = detail::axpy(wg[i / 2], f1, std::move(gauss));
        gauss = detail::axpy(wg[i / 2], f2, std::move(gauss));
      }
    }
    T value = detail::axpy(h, kron, detail::zero_like(kron));
    const double err = std::abs(h) * detail::magnitude(detail::diff(kron, gauss));
    return Panel{a, b, std::move(value), err};
  };

  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    panels.push_back(evaluate(breakpoints[i], breakpoints[i + 1]));
  }
  auto total = [&]() {
    std::sort(panels.begin(), panels.end(), [](const Panel& p, const Panel& q) { return p.a < q.a; });
    T sum = detail::zero_like(panels.front().value);
    double err = 0.0;
    for (const auto& p : panels) {
      sum = detail::axpy(1.0, p.value, std::move(sum));
      err += p.error;
    }
    return std::pair<T, double>(std::move(sum), err);
  };

  auto [value, error] = total();
  while (static_cast<int>(panels.size()) < opt.max_intervals) {
    const double target = std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(value));
    if (error <= target) break;
    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [](const Panel& p, const Panel& q) { return p.error < q.error; });
    const double a = worst->a;
    const double b = worst->b;
    const double m = 0.5 * (a + b);
    if (!(m > a && m < b)) break;
    *worst = evaluate(a, m);
    panels.push_back(evaluate(m, b));
    std::tie(value, error) = total();
  }
  return AdaptiveResult<T>{std::move(value), error, static_cast<int>(panels.size())};
}

}  // namespace dunkl::quad

#endif  // DUNKL_QUADRATURE_HPP
