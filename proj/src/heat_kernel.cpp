#include "dunkl/heat_kernel.hpp"

#include "dunkl/basis.hpp"
#include "dunkl/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace dunkl {

double bessel_i(double nu, double z) { return special::bessel_i(nu, z); }
double bessel_i_over_power(double nu, double z) { return special::bessel_i_over_power(nu, z); }

PiMeasure::PiMeasure(std::vector<double> beta, int order) : beta_(std::move(beta)) {
  if (order < 1) throw std::invalid_argument("PiMeasure: order must be positive");
  for (double b : beta_) {
    if (!(b >= -0.5)) throw std::invalid_argument("PiMeasure: beta below -1/2");
    if (b == -0.5) {
      const double w = 1.0 / std::sqrt(2.0 * std::numbers::pi);
      rules_.push_back(quad::Rule{{-1.0, 1.0}, {w, w}});
      continue;
    }
    quad::Rule r = quad::gauss_jacobi(order, b - 0.5, b - 0.5);
    const double norm = std::exp(-0.5 * std::log(std::numbers::pi) - b * std::numbers::ln2 -
                                 std::lgamma(b + 0.5));
    for (double& w : r.weights) w *= norm;
    rules_.push_back(std::move(r));
  }
}

double PiMeasure::mass(std::size_t j) const {
  double m = 0.0;
  for (double w : rules_.at(j).weights) m += w;
  return m;
}

double PiMeasure::exact_mass(double beta) {
  return std::exp(-beta * std::numbers::ln2 - std::lgamma(beta + 1.0));
}

QPair q_pm(std::span<const double> x, std::span<const double> y, std::span<const double> s) {
  if (x.size() != y.size() || x.size() != s.size()) throw std::invalid_argument("q_pm: dimension mismatch");
  double base = 0.0;
  double cross = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(s[i] >= -1.0 && s[i] <= 1.0)) throw std::invalid_argument("q_pm: s outside [-1,1]^d");
    base += x[i] * x[i] + y[i] * y[i];
    cross += 2.0 * x[i] * y[i] * s[i];
  }
  return {base + cross, base - cross};
}

void HeatKernelQuery::validate() const {
  if (!(t > 0.0)) throw std::domain_error("heat kernel: t must be positive");
  const std::size_t d = alpha.dim();
  if (x.size() != d || y.size() != d || eps.dim() != d) {
    throw std::invalid_argument("heat kernel: dimension mismatch");
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw std::domain_error("heat kernel: point outside the open positive cone");
  }
}

namespace {

double log_sinh(double v) {
  if (v < 20.0) return std::log(std::sinh(v));
  return v - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * v));
}

// One coordinate of the product form. g = (2 sinh 2t)^{-1} e^{-coth(2t)(x^2+y^2)/2}
// (xy)^eps I_beta(xy / sinh 2t) / (xy)^beta with beta = alpha_i + eps_i.
struct AxisTerms {
  double log_g = 0.0;
  double a = 0.0;      // d/dt log g
  double b = 0.0;      // d/dx log g
  double da_dx = 0.0;  // d/dx d/dt log g
};

AxisTerms axis_terms(double t, double x, double y, double beta, int eps, bool derivatives) {
  const double ls = log_sinh(2.0 * t);
  const double coth = 1.0 / std::tanh(2.0 * t);
  const double c = x * y * std::exp(-ls);
  const double log_r_scaled = special::log_bessel_i_over_power(beta, c) - c;
  AxisTerms r;
  double log_xy = 0.0;
  if (eps == 1) log_xy = (x * y > 0.0) ? std::log(x * y) : -std::numeric_limits<double>::infinity();
  r.log_g = -std::numbers::ln2 - (1.0 + beta) * ls - 0.5 * (x - y) * (x - y) * coth -
            x * y * std::tanh(t) + log_xy + log_r_scaled;
  if (!derivatives) return r;

  const double comp = special::bessel_i_ratio_complement(beta, c);  // 1 - rho
  const double rho = 1.0 - comp;
  const double sh = std::exp(ls);
  const double cosh2 = std::cosh(2.0 * t);
  const double sinh_t = std::sinh(t);
  const double cosh2_m1 = 2.0 * sinh_t * sinh_t;
  const double inv_sh2 = 1.0 / (sh * sh);
  // 1 - cosh(2t) rho and y rho - x cosh(2t), rearranged to avoid cancellation as t -> 0
  r.a = -2.0 * (1.0 + beta) * coth + ((x - y) * (x - y) + 2.0 * x * y * (comp - cosh2_m1 * rho)) * inv_sh2;
  r.b = eps / x + ((y - x) - x * cosh2_m1 - y * comp) / sh;
  // d/dc (c rho) = c (1 - rho^2) - 2 beta rho
  const double crho_prime = c * comp * (1.0 + rho) - 2.0 * beta * rho;
  r.da_dx = (2.0 * x - 2.0 * y * cosh2 * crho_prime) * inv_sh2;
  return r;
}

}  // namespace

double log_heat_component_bessel(const HeatKernelQuery& q) {
  q.validate();
  double lg = 0.0;
  for (std::size_t i = 0; i < q.alpha.dim(); ++i) {
    lg += axis_terms(q.t, q.x[i], q.y[i], q.alpha[i] + q.eps[i], q.eps[i], false).log_g;
  }
  return lg;
}

double heat_component_bessel(const HeatKernelQuery& q) { return std::exp(log_heat_component_bessel(q)); }

HeatDerivatives heat_component_derivatives(const HeatKernelQuery& q) {
  q.validate();
  const std::size_t d = q.alpha.dim();
  std::vector<AxisTerms> terms(d);
  double lg = 0.0;
  double a_sum = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    terms[i] = axis_terms(q.t, q.x[i], q.y[i], q.alpha[i] + q.eps[i], q.eps[i], true);
    lg += terms[i].log_g;
    a_sum += terms[i].a;
  }
  HeatDerivatives out;
  out.value = std::exp(lg);
  out.dt = out.value * a_sum;
  out.grad_x.resize(d);
  out.grad_x_dt.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    out.grad_x[j] = out.value * terms[j].b;
    out.grad_x_dt[j] = out.value * (terms[j].b * a_sum + terms[j].da_dx);
  }
  return out;
}

double heat_component_schlafli(const HeatKernelQuery& q, const PiMeasure& pi) {
  q.validate();
  const std::size_t d = q.alpha.dim();
  if (pi.dim() != d) throw std::invalid_argument("schlafli: measure dimension mismatch");
  for (std::size_t i = 0; i < d; ++i) {
    if (std::abs(pi.beta()[i] - (q.alpha[i] + q.eps[i])) > 1e-14) {
      throw std::invalid_argument("schlafli: measure must be Pi_{alpha+eps}");
    }
  }
  const double zeta = std::tanh(q.t);
  double log_pref = -static_cast<double>(d) * std::numbers::ln2;
  // (1 - z^2)/(2z) = 1/sinh(2t)
  log_pref -= (static_cast<double>(d) + q.alpha.norm1() + q.eps.norm1()) * log_sinh(2.0 * q.t);
  for (std::size_t i = 0; i < d; ++i) {
    if (q.eps[i] == 1) log_pref += std::log(q.x[i] * q.y[i]);
  }

  // log-sum-exp over the tensor nodes
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> s(d);
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= pi.axis(i).size();
  std::vector<double> logs;
  logs.reserve(total);
  std::vector<double> wts;
  wts.reserve(total);
  for (std::size_t n = 0; n < total; ++n) {
    double w = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      s[i] = pi.axis(i).nodes[idx[i]];
      w *= pi.axis(i).weights[idx[i]];
    }
    const QPair qq = q_pm(q.x, q.y, s);
    logs.push_back(-qq.plus / (4.0 * zeta) - 0.25 * zeta * qq.minus);
    wts.push_back(w);
    for (std::size_t i = 0; i < d; ++i) {
      if (++idx[i] < pi.axis(i).size()) break;
      idx[i] = 0;
    }
  }
  const double top = *std::max_element(logs.begin(), logs.end());
  double sum = 0.0;
  for (std::size_t n = 0; n < total; ++n) sum += wts[n] * std::exp(logs[n] - top);
  return std::exp(log_pref + top) * sum;
}

double heat_component_schlafli(const HeatKernelQuery& q, int order) {
  std::vector<double> beta(q.alpha.dim());
  for (std::size_t i = 0; i < beta.size(); ++i) beta[i] = q.alpha[i] + q.eps.components().at(i);
  return heat_component_schlafli(q, PiMeasure(beta, order));
}

int heat_series_cutoff(double t, std::size_t d, double tol) {
  if (!(t > 0.0) || !(tol > 0.0)) throw std::invalid_argument("heat_series_cutoff: need t > 0, tol > 0");
  for (int n = 0; n < 100000; ++n) {
    const double bound = std::exp(-2.0 * t * (n + 1.0)) * std::pow(n + 1.0, static_cast<double>(d));
    if (bound <= tol) return n;
  }
  return 100000;
}

namespace {

// sum_{|k| <= cutoff, keep(k)} e^{-t lambda_|k|} h_k(x) h_k(y), with `spectral(n)` the time factor
template <class Weight>
double spectral_sum(std::span<const double> x, std::span<const double> y, const MultiplicityIndex& alpha,
                    const ParityVector* eps, int cutoff, Weight&& weight) {
  const std::size_t d = alpha.dim();
  if (x.size() != d || y.size() != d) throw std::invalid_argument("spectral sum: dimension mismatch");
  std::vector<std::vector<double>> hx(d), hy(d);
  for (std::size_t j = 0; j < d; ++j) {
    hx[j] = hermite_1d_table(cutoff, alpha[j], x[j]);
    hy[j] = hermite_1d_table(cutoff, alpha[j], y[j]);
  }
  double total = 0.0;
  for (const MultiIndex& k : enumerate_multi_indices(d, cutoff)) {
    if (eps && !in_parity_class(k, *eps)) continue;
    double p = weight(k.norm1());
    for (std::size_t j = 0; j < d; ++j) p *= hx[j][k[j]] * hy[j][k[j]];
    total += p;
  }
  return total;
}

}  // namespace

double heat_component_series(const HeatKernelQuery& q, int cutoff) {
  q.validate();
  return spectral_sum(q.x, q.y, q.alpha, &q.eps, cutoff,
                      [&](int n) { return std::exp(-q.t * eigenvalue(n, q.alpha)); });
}

double heat_component_series_factored(const HeatKernelQuery& q, int cutoff) {
  q.validate();
  double value = 1.0;
  for (std::size_t j = 0; j < q.alpha.dim(); ++j) {
    const auto hx = hermite_1d_table(cutoff, q.alpha[j], q.x[j]);
    const auto hy = hermite_1d_table(cutoff, q.alpha[j], q.y[j]);
    double axis = 0.0;
    for (int k = q.eps[j]; k <= cutoff; k += 2) {
      axis += std::exp(-q.t * (2.0 * k + 2.0 * q.alpha[j] + 2.0)) * hx[k] * hy[k];
    }
    value *= axis;
  }
  return value;
}

double heat_full_series(double t, std::span<const double> x, std::span<const double> y,
                        const MultiplicityIndex& alpha, int cutoff) {
  if (!(t > 0.0)) throw std::domain_error("heat kernel: t must be positive");
  return spectral_sum(x, y, alpha, nullptr, cutoff,
                      [&](int n) { return std::exp(-t * eigenvalue(n, alpha)); });
}

double heat_full(double t, std::span<const double> x, std::span<const double> y,
                 const MultiplicityIndex& alpha) {
  if (!(t > 0.0)) throw std::domain_error("heat kernel: t must be positive");
  const std::size_t d = alpha.dim();
  if (x.size() != d || y.size() != d) throw std::invalid_argument("heat_full: dimension mismatch");
  // the full kernel factorizes over coordinates; odd components change sign with x_i y_i
  double value = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double ax = std::abs(x[i]);
    const double ay = std::abs(y[i]);
    const double even = std::exp(axis_terms(t, ax, ay, alpha[i], 0, false).log_g);
    double odd = std::exp(axis_terms(t, ax, ay, alpha[i] + 1.0, 1, false).log_g);
    if (x[i] * y[i] < 0.0) odd = -odd;
    value *= even + odd;
  }
  return value;
}

double heat_semigroup_integral(double t, double s, std::span<const double> x,
                               std::span<const double> y, const MultiplicityIndex& alpha,
                               int nodes_per_half_axis) {
  const std::size_t d = alpha.dim();
  double reach = 0.0;
  for (std::size_t i = 0; i < d; ++i) reach = std::max({reach, std::abs(x[i]), std::abs(y[i])});
  const double radius = reach + 10.0;
  std::vector<quad::Rule> rules;
  for (std::size_t i = 0; i < d; ++i) {
    rules.push_back(quad::interval_rule(nodes_per_half_axis, alpha[i], 0.0, radius));
  }
  const std::size_t n_masks = std::size_t{1} << d;
  std::vector<std::size_t> idx(d, 0);
  std::size_t total = 1;
  for (const auto& r : rules) total *= r.size();
  Point z(d);
  double sum = 0.0;
  for (std::size_t n = 0; n < total; ++n) {
    double w = 1.0;
    for (std::size_t i = 0; i < d; ++i) w *= rules[i].weights[idx[i]];
    for (std::size_t m = 0; m < n_masks; ++m) {
      for (std::size_t i = 0; i < d; ++i) {
        const double v = rules[i].nodes[idx[i]];
        z[i] = ((m >> i) & 1U) ? -v : v;
      }
      sum += w * heat_full(t, x, z, alpha) * heat_full(s, z, y, alpha);
    }
    for (std::size_t i = 0; i < d; ++i) {
      if (++idx[i] < rules[i].size()) break;
      idx[i] = 0;
    }
  }
  return sum;
}

double poisson_component(double t, std::span<const double> x, std::span<const double> y,
                         const MultiplicityIndex& alpha, const ParityVector& eps, double rel_tol) {
  if (!(t > 0.0)) throw std::domain_error("poisson_component: t must be positive");
  HeatKernelQuery q{1.0, Point(x.begin(), x.end()), Point(y.begin(), y.end()), alpha, eps};
  q.validate();
  const double lambda0 = eigenvalue(0, alpha);
  // u = e^v; the heat time t^2/(4u) makes the integrand negligible once lambda0 t^2/(4u) > 700
  const double u_min = lambda0 * t * t / (4.0 * 700.0);
  const double u_max = 745.0;
  const double u_mid = 0.25 * lambda0 * t * t;
  std::vector<double> breaks{std::log(u_min), std::log(u_max), 0.0};
  if (u_mid > u_min && u_mid < u_max) breaks.push_back(std::log(u_mid));
  double dist2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) dist2 += (x[i] - y[i]) * (x[i] - y[i]);
  if (dist2 > 0.0) {
    const double u_diag = t * t / dist2;
    if (u_diag > u_min && u_diag < u_max) breaks.push_back(std::log(u_diag));
  }
  const double log_sqrt_pi = 0.5 * std::log(std::numbers::pi);
  auto integrand = [&](double v) {
    const double u = std::exp(v);
    HeatKernelQuery qq = q;
    qq.t = t * t / (4.0 * u);
    return std::exp(log_heat_component_bessel(qq) + 0.5 * v - u - log_sqrt_pi);
  };
  quad::AdaptiveOptions opt;
  opt.rel_tol = rel_tol;
  return quad::integrate(integrand, breaks, opt).value;
}

double poisson_component_series(double t, std::span<const double> x, std::span<const double> y,
                                const MultiplicityIndex& alpha, const ParityVector& eps, int cutoff) {
  if (!(t > 0.0)) throw std::domain_error("poisson_component: t must be positive");
  return spectral_sum(x, y, alpha, &eps, cutoff,
                      [&](int n) { return std::exp(-t * std::sqrt(eigenvalue(n, alpha))); });
}

}  // namespace dunkl
