#include "dunkl/basis.hpp"

#include "dunkl/special.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dunkl {

double laguerre_poly(int k, double a, double u) {
  if (!(a > -1.0)) throw std::invalid_argument("laguerre_poly: order must be > -1");
  if (!(u >= 0.0)) throw std::invalid_argument("laguerre_poly: argument must be >= 0");
  return special::laguerre(k, a, u);
}

std::vector<double> hermite_1d_table(int n, double a, double x) {
  if (n < 0) throw std::invalid_argument("hermite_1d: negative index");
  if (!(a >= -0.5)) throw std::invalid_argument("hermite_1d: alpha below -1/2");
  std::vector<double> h(n + 1);
  const double u = x * x;
  const double g = std::exp(-0.5 * u);
  // normalized Laguerre recurrences for orders a (even) and a+1 (odd)
  for (int parity = 0; parity < 2; ++parity) {
    const double order = a + parity;
    const double factor = parity ? g * x : g;
    double prev = 0.0;
    double cur = std::exp(-0.5 * std::lgamma(order + 1.0));
    double r_prev = 0.0;
    for (int k = 0; 2 * k + parity <= n; ++k) {
      h[2 * k + parity] = cur * factor;
      const double r = std::sqrt((k + 1.0) / (k + 1.0 + order));
      const double next =
          ((2.0 * k + 1.0 + order - u) * r * cur - (k + order) * r * r_prev * prev) / (k + 1.0);
      prev = cur;
      cur = next;
      r_prev = r;
    }
  }
  return h;
}

double hermite_1d(int n, double a, double x) {
  if (n < 0) throw std::invalid_argument("hermite_1d: negative index");
  if (!(a >= -0.5)) throw std::invalid_argument("hermite_1d: alpha below -1/2");
  const int k = n / 2;
  const double g = std::exp(-0.5 * x * x);
  if (n % 2 == 0) return special::laguerre_normalized(k, a, x * x) * g;
  return special::laguerre_normalized(k, a + 1.0, x * x) * g * x;
}

double hermite_nd(const MultiIndex& k, const MultiplicityIndex& alpha, std::span<const double> x) {
  if (k.dim() != alpha.dim() || x.size() != alpha.dim()) {
    throw std::invalid_argument("hermite_nd: dimension mismatch");
  }
  double v = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) v *= hermite_1d(k[j], alpha[j], x[j]);
  return v;
}

namespace {

Complex shifted(const Function& f, Point& y, std::size_t j, double base, double delta) {
  y[j] = base + delta;
  const Complex v = f(y);
  y[j] = base;
  return v;
}

Complex first_derivative(const Function& f, Point& y, std::size_t j, double h) {
  const double b = y[j];
  return (-shifted(f, y, j, b, 2 * h) + 8.0 * shifted(f, y, j, b, h) - 8.0 * shifted(f, y, j, b, -h) +
          shifted(f, y, j, b, -2 * h)) /
         (12.0 * h);
}

Complex second_derivative(const Function& f, Point& y, std::size_t j, double h, Complex f0) {
  const double b = y[j];
  return (-shifted(f, y, j, b, 2 * h) + 16.0 * shifted(f, y, j, b, h) - 30.0 * f0 +
          16.0 * shifted(f, y, j, b, -h) - shifted(f, y, j, b, -2 * h)) /
         (12.0 * h * h);
}

}  // namespace

Complex dunkl_derivative(const Function& f, std::size_t axis, const MultiplicityIndex& alpha,
                         std::span<const double> x) {
  if (x.size() != alpha.dim()) throw std::invalid_argument("dunkl_derivative: dimension mismatch");
  if (axis < 1 || axis > x.size()) throw std::out_of_range("dunkl_derivative: axis out of range");
  const std::size_t j = axis - 1;
  if (x[j] == 0.0) throw std::domain_error("dunkl_derivative: x_j = 0");
  Point y(x.begin(), x.end());
  const double h = 1e-5 * std::max(1.0, std::abs(x[j]));
  const Complex d = first_derivative(f, y, j, h);
  const Point r = reflect(x, axis);
  return d + (alpha[j] + 0.5) * (f(y) - f(r)) / x[j];
}

Complex oscillator_apply(const Function& f, const MultiplicityIndex& alpha,
                         std::span<const double> x) {
  if (x.size() != alpha.dim()) throw std::invalid_argument("oscillator_apply: dimension mismatch");
  Point y(x.begin(), x.end());
  const Complex f0 = f(y);
  Complex lap = 0.0;
  double r2 = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] == 0.0) throw std::domain_error("oscillator_apply: zero coordinate");
    r2 += x[j] * x[j];
    const double scale = std::max(1.0, std::abs(x[j]));
    const Complex d1 = first_derivative(f, y, j, 1e-5 * scale);
    const Complex d2 = second_derivative(f, y, j, 1e-3 * scale, f0);
    const Point r = reflect(x, j + 1);
    lap += d2 + (2.0 * alpha[j] + 1.0) / x[j] * d1 - (alpha[j] + 0.5) * (f0 - f(r)) / (x[j] * x[j]);
  }
  return -lap + r2 * f0;
}

Complex SpectralCoefficients::at(const MultiIndex& k) const {
  auto it = std::lower_bound(indices.begin(), indices.end(), k, [](const MultiIndex& a, const MultiIndex& b) {
    if (a.norm1() != b.norm1()) return a.norm1() < b.norm1();
    return a < b;
  });
  if (it != indices.end() && *it == k) return values[static_cast<std::size_t>(it - indices.begin())];
  return 0.0;
}

ExpansionQuadrature default_expansion_quadrature(const MultiplicityIndex& alpha, int cutoff,
                                                 int min_nodes) {
  const int n = std::max(2 * cutoff + 20, min_nodes);
  ExpansionQuadrature q;
  for (std::size_t j = 0; j < alpha.dim(); ++j) q.axes.push_back(quad::half_line_rule(n, alpha[j]));
  return q;
}

ExpansionQuadrature box_expansion_quadrature(const MultiplicityIndex& alpha,
                                             std::span<const double> lo,
                                             std::span<const double> hi, int nodes_per_axis) {
  if (lo.size() != alpha.dim() || hi.size() != alpha.dim()) {
    throw std::invalid_argument("box quadrature: dimension mismatch");
  }
  ExpansionQuadrature q;
  for (std::size_t j = 0; j < alpha.dim(); ++j) {
    q.axes.push_back(quad::interval_rule(nodes_per_axis, alpha[j], lo[j], hi[j]));
  }
  return q;
}

SpectralCoefficients expand(const Function& f, const MultiplicityIndex& alpha, int cutoff,
                            Domain domain, const std::optional<ExpansionQuadrature>& quadrature,
                            const std::optional<ParityVector>& only_parity) {
  if (cutoff < 0) throw std::invalid_argument("expand: negative cutoff");
  const std::size_t d = alpha.dim();
  const ExpansionQuadrature q = quadrature ? *quadrature : default_expansion_quadrature(alpha, cutoff);
  if (q.axes.size() != d) throw std::invalid_argument("expand: quadrature dimension mismatch");

  SpectralCoefficients out;
  out.alpha = alpha;
  out.cutoff = cutoff;
  out.domain = domain;
  for (auto& k : enumerate_multi_indices(d, cutoff)) {
    if (!only_parity || in_parity_class(k, *only_parity)) out.indices.push_back(std::move(k));
  }
  out.values.assign(out.indices.size(), 0.0);

  // tables[j][i][n] = h_n^{alpha_j}(node i of axis j)
  std::vector<std::vector<std::vector<double>>> tables(d);
  std::vector<std::size_t> sizes(d);
  std::size_t total = 1;
  for (std::size_t j = 0; j < d; ++j) {
    sizes[j] = q.axes[j].size();
    total *= sizes[j];
    for (double x : q.axes[j].nodes) tables[j].push_back(hermite_1d_table(cutoff, alpha[j], x));
  }

  std::vector<int> parity_of(out.indices.size());
  for (std::size_t i = 0; i < out.indices.size(); ++i) {
    int mask = 0;
    for (std::size_t j = 0; j < d; ++j) mask |= (out.indices[i][j] % 2) << j;
    parity_of[i] = mask;
  }

  const std::size_t n_masks = std::size_t{1} << d;
  std::vector<std::size_t> idx(d, 0);
  Point x(d);
  Point y(d);
  std::vector<Complex> parts(n_masks);
  for (std::size_t node = 0; node < total; ++node) {
    double w = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      x[j] = q.axes[j].nodes[idx[j]];
      w *= q.axes[j].weights[idx[j]];
    }
    if (domain == Domain::positive) {
      parts.assign(n_masks, f(x));
    } else {
      // parts[eps] = sum_s (-1)^{eps.s} f(sigma^s x), i.e. 2^d f_eps(x)
      std::vector<Complex> vals(n_masks);
      for (std::size_t s = 0; s < n_masks; ++s) {
        for (std::size_t j = 0; j < d; ++j) y[j] = ((s >> j) & 1U) ? -x[j] : x[j];
        vals[s] = f(y);
      }
      for (std::size_t e = 0; e < n_masks; ++e) {
        Complex acc = 0.0;
        for (std::size_t s = 0; s < n_masks; ++s) {
          const int sign = (__builtin_popcountll(e & s) % 2) ? -1 : 1;
          acc += static_cast<double>(sign) * vals[s];
        }
        parts[e] = acc;
      }
    }
    for (std::size_t i = 0; i < out.indices.size(); ++i) {
      double h = w;
      for (std::size_t j = 0; j < d; ++j) h *= tables[j][idx[j]][out.indices[i][j]];
      out.values[i] += h * parts[parity_of[i]];
    }
    for (std::size_t j = 0; j < d; ++j) {
      if (++idx[j] < sizes[j]) break;
      idx[j] = 0;
    }
  }
  for (const Complex& v : out.values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::runtime_error("expand: non-finite quadrature value");
    }
  }
  return out;
}

Complex synthesize(const SpectralCoefficients& c, std::span<const double> x) {
  const std::size_t d = c.alpha.dim();
  if (x.size() != d) throw std::invalid_argument("synthesize: dimension mismatch");
  std::vector<std::vector<double>> tables(d);
  for (std::size_t j = 0; j < d; ++j) tables[j] = hermite_1d_table(c.cutoff, c.alpha[j], x[j]);
  Complex sum = 0.0;
  for (std::size_t i = 0; i < c.indices.size(); ++i) {
    double h = 1.0;
    for (std::size_t j = 0; j < d; ++j) h *= tables[j][c.indices[i][j]];
    sum += c.values[i] * h;
  }
  return sum;
}

double coefficient_norm(const SpectralCoefficients& c) {
  double s = 0.0;
  for (const Complex& v : c.values) s += std::norm(v);
  return std::sqrt(s);
}

double basis_inner_product(const MultiIndex& k, const MultiIndex& m, const MultiplicityIndex& alpha,
                           Domain domain) {
  if (k.dim() != alpha.dim() || m.dim() != alpha.dim()) {
    throw std::invalid_argument("basis_inner_product: dimension mismatch");
  }
  double prod = 1.0;
  for (std::size_t j = 0; j < alpha.dim(); ++j) {
    const int top = std::max(k[j], m[j]);
    const quad::Rule r = quad::half_line_rule(top + 20, alpha[j]);
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const auto t = hermite_1d_table(top, alpha[j], r.nodes[i]);
      s += r.weights[i] * t[k[j]] * t[m[j]];
    }
    if (domain == Domain::full) s *= ((k[j] + m[j]) % 2 == 0) ? 2.0 : 0.0;
    prod *= s;
  }
  return prod;
}

}  // namespace dunkl
