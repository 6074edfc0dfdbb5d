#include "dunkl/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numeric>

namespace dunkl::quad {

namespace detail {

// Boost stores the positive half in ascending order starting at 0; the driver wants the
// outermost node first and the center last.
const std::array<double, 8>& kronrod_nodes() {
  static const std::array<double, 8> nodes = [] {
    const auto& a = boost::math::quadrature::gauss_kronrod<double, 15>::abscissa();
    std::array<double, 8> out{};
    for (int i = 0; i < 8; ++i) out[i] = a[7 - i];
    return out;
  }();
  return nodes;
}

const std::array<double, 8>& kronrod_weights() {
  static const std::array<double, 8> weights = [] {
    const auto& w = boost::math::quadrature::gauss_kronrod<double, 15>::weights();
    std::array<double, 8> out{};
    for (int i = 0; i < 8; ++i) out[i] = w[7 - i];
    return out;
  }();
  return weights;
}

const std::array<double, 4>& gauss7_weights() {
  static const std::array<double, 4> weights = [] {
    const auto& w = boost::math::quadrature::gauss<double, 7>::weights();
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i) out[i] = w[3 - i];
    return out;
  }();
  return weights;
}

}  // namespace detail

Rule gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi: need at least one node");
  if (!(a > -1.0 && b > -1.0)) throw std::invalid_argument("gauss_jacobi: exponents must be > -1");

  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 1));
  const double ab = a + b;
  for (int k = 0; k < n; ++k) {
    if (k == 0) {
      diag(0) = (a == b) ? 0.0 : (b - a) / (ab + 2.0);
    } else {
      const double s = 2.0 * k + ab;
      diag(k) = (a == b) ? 0.0 : (b * b - a * a) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    double beta;
    if (k == 1) {
      // the generic formula has a removable 0/0 when a + b = -1
      beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sub(k - 1) = std::sqrt(beta);
  }
  const double log_mu0 = (ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                         std::lgamma(ab + 2.0);
  const double mu0 = std::exp(log_mu0);

  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  if (n == 1) {
    r.nodes[0] = diag(0);
    r.weights[0] = mu0;
    return r;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    r.weights[i] = mu0 * v0 * v0;
  }
  if (a == b) {
    // enforce exact symmetry of the symmetric rule
    for (int i = 0; i < n / 2; ++i) {
      const double x = 0.5 * (r.nodes[n - 1 - i] - r.nodes[i]);
      const double w = 0.5 * (r.weights[n - 1 - i] + r.weights[i]);
      r.nodes[i] = -x;
      r.nodes[n - 1 - i] = x;
      r.weights[i] = w;
      r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  }
  return r;
}

Rule gauss_legendre(int n, double lo, double hi) {
  Rule r = gauss_jacobi(n, 0.0, 0.0);
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r.nodes[i] = c + h * r.nodes[i];
    r.weights[i] *= h;
  }
  return r;
}

namespace {

// L_n^a(u) and L_{n-1}^a(u) by the three-term recurrence
std::pair<double, double> laguerre_pair(int n, double a, double u) {
  double prev = 0.0;
  double cur = 1.0;
  for (int k = 0; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + a - u) * cur - (k + a) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

}  // namespace

LaguerreRule gauss_laguerre(int n, double a) {
  if (n < 1) throw std::invalid_argument("gauss_laguerre: need at least one node");
  if (!(a > -1.0)) throw std::invalid_argument("gauss_laguerre: order must be > -1");

  std::vector<double> nodes(n);
  if (n == 1) {
    nodes[0] = a + 1.0;
  } else {
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(n - 1);
    for (int k = 0; k < n; ++k) diag(k) = 2.0 * k + a + 1.0;
    for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(k * (k + a));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    for (int i = 0; i < n; ++i) nodes[i] = solver.eigenvalues()(i);
  }

  LaguerreRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  r.scaled_weights.resize(n);
  const double log_c = std::lgamma(n + a + 1.0) - std::lgamma(n + 1.0);
  for (int i = 0; i < n; ++i) {
    double u = nodes[i];
    double deriv = 1.0;
    for (int it = 0; it < 8; ++it) {
      const auto [ln, lnm1] = laguerre_pair(n, a, u);
      deriv = (n * ln - (n + a) * lnm1) / u;
      const double step = ln / deriv;
      u -= step;
      if (std::abs(step) <= 1e-16 * std::abs(u)) break;
    }
    const auto [ln, lnm1] = laguerre_pair(n, a, u);
    deriv = (n * ln - (n + a) * lnm1) / u;
    const double log_w = log_c - std::log(u) - 2.0 * std::log(std::abs(deriv));
    r.nodes[i] = u;
    r.weights[i] = std::exp(log_w);
    r.scaled_weights[i] = std::exp(log_w + u);
  }
  return r;
}

Rule half_line_rule(int n, double a) {
  // u = x^2: x^{2a+1} dx = u^a du / 2
  const LaguerreRule lr = gauss_laguerre(n, a);
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = std::sqrt(lr.nodes[i]);
    r.weights[i] = 0.5 * lr.scaled_weights[i];
  }
  return r;
}

Rule interval_rule(int n, double a, double lo, double hi) {
  if (!(lo >= 0.0 && hi > lo)) throw std::invalid_argument("interval_rule: need 0 <= lo < hi");
  const double m = 2.0 * a + 1.0;
  Rule r;
  if (lo == 0.0 && m > 0.0) {
    Rule j = gauss_jacobi(n, 0.0, m);
    const double h = 0.5 * hi;
    const double scale = std::pow(h, m) * h;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
      r.nodes[i] = h * (1.0 + j.nodes[i]);
      r.weights[i] = j.weights[i] * scale;
    }
    return r;
  }
  r = gauss_legendre(n, lo, hi);
  for (int i = 0; i < n; ++i) r.weights[i] *= std::pow(r.nodes[i], m);
  return r;
}

}  // namespace dunkl::quad
