#include "dunkl/cz_kernels.hpp"

#include "dunkl/heat_kernel.hpp"
#include "dunkl/parallel.hpp"
#include "dunkl/quadrature.hpp"
#include "dunkl/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace dunkl {

namespace {

using Vec = std::vector<double>;

double dist2(std::span<const double> x, std::span<const double> y) {
  double r = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) r += (x[j] - y[j]) * (x[j] - y[j]);
  return r;
}

HeatKernelQuery make_query(const ParityVector& eps, std::span<const double> x, std::span<const double> y,
                           const MultiplicityIndex& alpha) {
  HeatKernelQuery q;
  q.x.assign(x.begin(), x.end());
  q.y.assign(y.begin(), y.end());
  q.alpha = alpha;
  q.eps = eps;
  q.validate();
  if (dist2(x, y) == 0.0) throw std::invalid_argument("kernel: x = y lies on the diagonal");
  return q;
}

// Heat-time window outside of which the integrands are negligible.
struct TimeWindow {
  double lo;
  double hi;
  std::vector<double> scales;  // interior breakpoints in t
};

TimeWindow time_window(double r2, const MultiplicityIndex& alpha) {
  const double l0 = eigenvalue(0, alpha);
  TimeWindow w;
  w.lo = r2 / 3000.0;
  w.hi = std::max(3.0, 45.0 / l0);
  w.scales = {r2 / 40.0, r2 / 8.0, r2, 0.1, 1.0, 3.0};
  return w;
}

std::vector<double> log_breaks(double a, double b, const std::vector<double>& scales) {
  std::vector<double> br{std::log(a), std::log(b)};
  for (double s : scales) {
    if (s > a && s < b) br.push_back(std::log(s));
  }
  return br;
}

Vec add(Vec a, const Vec& b) {
  if (a.empty()) return b;
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

double last(const Vec& v) { return v.empty() ? 0.0 : v.back(); }

// int_lo^hi F(t) dt for an integrand whose last component is |F|. Near a positive lower end
// the declared power (t - lo)^p is absorbed by t = lo + tau^{1/(p+1)}; the bulk is done in
// log t, and the part beyond the heat window (only needed for growing densities) on
// doubling panels.
template <class F>
Vec integrate_time(F&& f, double lo, double hi, double lo_power, const TimeWindow& w, bool tail,
                   const KernelOptions& opt) {
  const quad::AdaptiveOptions ao{.abs_tol = 0.0, .rel_tol = opt.rel_tol, .max_intervals = opt.max_intervals};
  Vec total;
  double start = std::max(lo, w.lo);
  if (lo > 0.0) {
    const double head = std::min(hi, 2.0 * lo);
    const double g = lo_power + 1.0;
    auto sub = [&](double tau) {
      const double t = lo + std::pow(tau, 1.0 / g);
      Vec v = f(t);
      const double jac = tau > 0.0 ? std::pow(tau, 1.0 / g - 1.0) / g : 0.0;
      for (double& c : v) c *= jac;
      return v;
    };
    total = add(std::move(total), quad::integrate(sub, {0.0, std::pow(head - lo, g)}, ao).value);
    start = head;
  }
  const double end = std::min(hi, w.hi);
  if (start < end) {
    auto logf = [&](double v) {
      const double t = std::exp(v);
      Vec r = f(t);
      for (double& c : r) c *= t;
      return r;
    };
    total = add(std::move(total), quad::integrate(logf, log_breaks(start, end, w.scales), ao).value);
  }
  if (tail && hi > end) {
    double a = std::max(end, start);
    for (int k = 0; k < 200 && a < hi; ++k) {
      const double b = std::min(hi, 2.0 * a);
      const Vec part = quad::integrate(f, {a, b}, ao).value;
      total = add(std::move(total), part);
      if (last(part) <= 1e-17 * last(total)) break;
      a = b;
    }
  }
  return total;
}

Complex eta_value(const LaplaceSymbol& sym, double t) { return sym.eta(t); }

void require_plain(const Symbol& sym) {
  if (sym.sqrt) throw std::invalid_argument("kernel: square-root symbols are not supported");
}

}  // namespace

KernelValue kernel_laplace(const LaplaceSymbol& sym, const ParityVector& eps, std::span<const double> x,
                           std::span<const double> y, const MultiplicityIndex& alpha, const KernelOptions& opt) {
  HeatKernelQuery q = make_query(eps, x, y, alpha);
  const TimeWindow w = time_window(dist2(x, y), alpha);
  auto f = [&](double t) {
    q.t = t;
    const Complex v = -heat_component_derivatives(q).dt * eta_value(sym, t);
    return Vec{v.real(), v.imag(), std::abs(v)};
  };
  const Vec r = integrate_time(f, 0.0, w.hi, 0.0, w, false, opt);
  return {Complex(r[0], r[1]), r[2], 0.0};
}

KernelValue kernel_stieltjes(const StieltjesSymbol& sym, const ParityVector& eps, std::span<const double> x,
                             std::span<const double> y, const MultiplicityIndex& alpha, const KernelOptions& opt) {
  HeatKernelQuery q = make_query(eps, x, y, alpha);
  meas_integral(sym, eigenvalue(0, alpha));
  KernelValue out;
  for (const Atom& a : sym.atoms) {
    q.t = a.t;
    const double g = heat_component_bessel(q);
    out.value += a.weight * g;
    out.abs_integral += std::abs(a.weight) * g;
  }
  const TimeWindow w = time_window(dist2(x, y), alpha);
  for (const DensityPiece& piece : sym.densities) {
    auto f = [&](double t) {
      q.t = t;
      const Complex v = heat_component_bessel(q) * piece.density(t);
      return Vec{v.real(), v.imag(), std::abs(v)};
    };
    const Vec r = integrate_time(f, piece.lo, piece.hi, piece.lo_power, w, true, opt);
    if (r.empty()) continue;
    out.value += Complex(r[0], r[1]);
    out.abs_integral += r[2];
  }
  return out;
}

KernelValue kernel(const Symbol& sym, const ParityVector& eps, std::span<const double> x,
                   std::span<const double> y, const MultiplicityIndex& alpha, const KernelOptions& opt) {
  require_plain(sym);
  if (const auto* l = std::get_if<LaplaceSymbol>(&sym.data)) return kernel_laplace(*l, eps, x, y, alpha, opt);
  return kernel_stieltjes(std::get<StieltjesSymbol>(sym.data), eps, x, y, alpha, opt);
}

KernelGradient kernel_gradient(const Symbol& sym, const ParityVector& eps, std::span<const double> x,
                               std::span<const double> y, const MultiplicityIndex& alpha, const KernelOptions& opt) {
  require_plain(sym);
  HeatKernelQuery qx = make_query(eps, x, y, alpha);
  HeatKernelQuery qy = make_query(eps, y, x, alpha);
  const std::size_t d = alpha.dim();
  const TimeWindow w = time_window(dist2(x, y), alpha);

  // layout: Re/Im of d/dx_j, then Re/Im of d/dy_j, then the sum of moduli
  auto pack = [d](const std::vector<double>& gx, const std::vector<double>& gy, Complex weight) {
    Vec v(4 * d + 1, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
      const Complex a = gx[j] * weight;
      const Complex b = gy[j] * weight;
      v[2 * j] = a.real();
      v[2 * j + 1] = a.imag();
      v[2 * d + 2 * j] = b.real();
      v[2 * d + 2 * j + 1] = b.imag();
      v[4 * d] += std::abs(a) + std::abs(b);
    }
    return v;
  };

  Vec total;
  if (const auto* l = std::get_if<LaplaceSymbol>(&sym.data)) {
    auto f = [&](double t) {
      qx.t = t;
      qy.t = t;
      return pack(heat_component_derivatives(qx).grad_x_dt, heat_component_derivatives(qy).grad_x_dt,
                  -eta_value(*l, t));
    };
    total = integrate_time(f, 0.0, w.hi, 0.0, w, false, opt);
  } else {
    const auto& s = std::get<StieltjesSymbol>(sym.data);
    meas_integral(s, eigenvalue(0, alpha));
    for (const Atom& a : s.atoms) {
      qx.t = a.t;
      qy.t = a.t;
      total = add(std::move(total),
                  pack(heat_component_derivatives(qx).grad_x, heat_component_derivatives(qy).grad_x, a.weight));
    }
    for (const DensityPiece& piece : s.densities) {
      auto f = [&](double t) {
        qx.t = t;
        qy.t = t;
        return pack(heat_component_derivatives(qx).grad_x, heat_component_derivatives(qy).grad_x,
                    piece.density(t));
      };
      total = add(std::move(total), integrate_time(f, piece.lo, piece.hi, piece.lo_power, w, true, opt));
    }
  }
  KernelGradient out;
  out.grad_x.assign(d, 0.0);
  out.grad_y.assign(d, 0.0);
  if (total.empty()) return out;
  for (std::size_t j = 0; j < d; ++j) {
    out.grad_x[j] = Complex(total[2 * j], total[2 * j + 1]);
    out.grad_y[j] = Complex(total[2 * d + 2 * j], total[2 * d + 2 * j + 1]);
  }
  out.abs_integral = total[4 * d];
  return out;
}

namespace {

struct TensorNodes {
  std::vector<Point> points;
  std::vector<double> weights;
};

TensorNodes tensor_nodes(const ExpansionQuadrature& q) {
  TensorNodes out;
  const std::size_t d = q.axes.size();
  std::vector<std::size_t> idx(d, 0);
  std::size_t total = 1;
  for (const auto& r : q.axes) total *= r.size();
  for (std::size_t n = 0; n < total; ++n) {
    Point p(d);
    double w = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      p[j] = q.axes[j].nodes[idx[j]];
      w *= q.axes[j].weights[idx[j]];
    }
    out.points.push_back(std::move(p));
    out.weights.push_back(w);
    for (std::size_t j = 0; j < d; ++j) {
      if (++idx[j] < q.axes[j].size()) break;
      idx[j] = 0;
    }
  }
  return out;
}

bool separated(const Box& a, const Box& b) {
  for (std::size_t j = 0; j < a.lo.size(); ++j) {
    if (a.hi[j] < b.lo[j] || b.hi[j] < a.lo[j]) return true;
  }
  return false;
}

}  // namespace

DualityResult duality_check(const Symbol& sym, const ParityVector& eps, const Function& f, const Box& f_support,
                            const Function& g, const Box& g_support, const MultiplicityIndex& alpha, int cutoff,
                            const DualityOptions& opt) {
  const std::size_t d = alpha.dim();
  for (const Box* b : {&f_support, &g_support}) {
    if (b->lo.size() != d || b->hi.size() != d) throw std::invalid_argument("duality: box dimension mismatch");
    for (std::size_t j = 0; j < d; ++j) {
      if (!(b->lo[j] >= 0.0 && b->hi[j] > b->lo[j])) throw std::invalid_argument("duality: invalid support box");
    }
  }
  if (!separated(f_support, g_support)) throw std::invalid_argument("duality: supports overlap");

  const int ne = opt.expansion_nodes > 0 ? opt.expansion_nodes : std::max(d == 1 ? 200 : 60, 2 * cutoff);
  const int nk = opt.kernel_nodes > 0 ? opt.kernel_nodes : (d == 1 ? 24 : 16);

  DualityResult out;
  const auto qf = box_expansion_quadrature(alpha, f_support.lo, f_support.hi, ne);
  const auto qg = box_expansion_quadrature(alpha, g_support.lo, g_support.hi, ne);
  const auto cf = expand(f, alpha, cutoff, Domain::positive, qf, eps);
  const auto cg = expand(g, alpha, cutoff, Domain::positive, qg, eps);
  const auto m = symbol_on_spectrum(sym, alpha, cutoff + 1);
  const Complex shift = opt.tail_correction ? m.at(cutoff + 1) : Complex(0.0);
  for (std::size_t i = 0; i < cf.size(); ++i) {
    const Complex p = cf.values[i] * std::conj(cg.values[i]);
    out.lhs_raw += m.at(cf.indices[i].norm1()) * p;
    out.lhs += (m.at(cf.indices[i].norm1()) - shift) * p;
  }

  const TensorNodes ny = tensor_nodes(box_expansion_quadrature(alpha, f_support.lo, f_support.hi, nk));
  const TensorNodes nx = tensor_nodes(box_expansion_quadrature(alpha, g_support.lo, g_support.hi, nk));
  std::vector<Complex> fy(ny.points.size());
  for (std::size_t i = 0; i < fy.size(); ++i) fy[i] = f(ny.points[i]) * ny.weights[i];
  std::vector<Complex> rows(nx.points.size());
  parallel_for(rows.size(), opt.workers, [&](std::size_t i) {
    Complex s = 0.0;
    for (std::size_t k = 0; k < fy.size(); ++k) {
      if (fy[k] == Complex(0.0)) continue;
      s += kernel(sym, eps, nx.points[i], ny.points[k], alpha, opt.kernel).value * fy[k];
    }
    rows[i] = s * std::conj(g(nx.points[i])) * nx.weights[i];
  });
  for (const Complex& r : rows) out.rhs += r;

  const double scale = std::max(std::abs(out.lhs), std::abs(out.rhs));
  out.gap = scale > 0.0 ? std::abs(out.lhs - out.rhs) / scale : 0.0;
  return out;
}

SweepGrid SweepGrid::refined() const {
  SweepGrid r = *this;
  r.margin = margin / 10.0;
  r.per_decade = 2 * per_decade;
  return r;
}

SweepGrid SweepGrid::standard(std::size_t d) {
  SweepGrid g;
  if (d == 1) {
    g.centers = {{0.05}, {0.4}, {1.0}, {2.5}};
  } else if (d == 2) {
    g.centers = {{0.1, 0.1}, {0.3, 1.2}, {1.0, 1.0}, {2.2, 0.6}};
  } else {
    g.centers = {Point(d, 0.2), Point(d, 1.0)};
  }
  return g;
}

std::vector<std::pair<Point, Point>> SweepGrid::pairs() const {
  if (!(margin > 0.0 && max_distance > margin && per_decade > 0)) {
    throw std::invalid_argument("sweep grid: need 0 < margin < max_distance and per_decade > 0");
  }
  const int n = std::max(1, static_cast<int>(std::ceil(per_decade * std::log10(max_distance / margin))));
  std::vector<double> radii;
  for (int i = 0; i <= n; ++i) radii.push_back(margin * std::pow(max_distance / margin, double(i) / n));

  std::vector<std::pair<Point, Point>> out;
  for (const Point& x : centers) {
    const std::size_t d = x.size();
    std::vector<Point> dirs;
    if (d == 1) {
      dirs = {{1.0}, {-1.0}};
    } else if (d == 2) {
      for (int k = 0; k < directions; ++k) {
        const double th = 2.0 * std::numbers::pi * (k + 0.125) / directions;
        dirs.push_back({std::cos(th), std::sin(th)});
      }
    } else {
      for (std::size_t j = 0; j < d; ++j) {
        for (double s : {1.0, -1.0}) {
          Point u(d, 0.0);
          u[j] = s;
          dirs.push_back(u);
        }
      }
    }
    for (const Point& u : dirs) {
      for (double r : radii) {
        Point y(d);
        bool inside = true;
        for (std::size_t j = 0; j < d; ++j) {
          y[j] = x[j] + r * u[j];
          inside = inside && y[j] > 0.0;
        }
        if (inside) out.emplace_back(x, y);
      }
    }
  }
  return out;
}

std::string to_string(EstimateKind k) { return k == EstimateKind::growth ? "growth" : "gradient"; }

namespace {

double stability(double c1, double c2) {
  if (c1 == 0.0 && c2 == 0.0) return 1.0;
  if (c1 == 0.0 || c2 == 0.0) return std::numeric_limits<double>::infinity();
  return std::max(c1 / c2, c2 / c1);
}

SweepLevel run_level(EstimateKind kind, const Symbol& sym, const ParityVector& eps, const MultiplicityIndex& alpha,
                     const SweepGrid& grid, int workers, const KernelOptions& opt) {
  SweepLevel level;
  level.grid = grid;
  const auto pairs = grid.pairs();
  level.points.resize(pairs.size());
  parallel_for(pairs.size(), workers, [&](std::size_t i) {
    const auto& [x, y] = pairs[i];
    SweepPoint p{x, y, std::sqrt(dist2(x, y)), 0.0};
    const double ball = measure_ball(x, p.distance, alpha);
    if (kind == EstimateKind::growth) {
      p.ratio = std::abs(kernel(sym, eps, x, y, alpha, opt).value) * ball;
    } else {
      const KernelGradient g = kernel_gradient(sym, eps, x, y, alpha, opt);
      double n2 = 0.0;
      for (std::size_t j = 0; j < g.grad_x.size(); ++j) n2 += std::norm(g.grad_x[j]) + std::norm(g.grad_y[j]);
      p.ratio = std::sqrt(n2) * p.distance * ball;
    }
    level.points[i] = std::move(p);
  });
  for (const auto& p : level.points) level.constant = std::max(level.constant, p.ratio);
  return level;
}

}  // namespace

bool KernelEstimateReport::stable() const {
  return std::isfinite(empirical_constant) && stability_factor < 2.0;
}

KernelEstimateReport estimate_sweep(EstimateKind kind, const Symbol& sym, const ParityVector& eps,
                                    const MultiplicityIndex& alpha, const SweepGrid& grid, int workers,
                                    const KernelOptions& opt) {
  for (const Point& c : grid.centers) {
    if (c.size() != alpha.dim()) throw std::invalid_argument("estimate_sweep: grid dimension mismatch");
  }
  KernelEstimateReport rep;
  rep.kind = kind;
  rep.symbol = sym.name;
  rep.alpha = alpha;
  rep.eps = eps;
  rep.base = run_level(kind, sym, eps, alpha, grid, workers, opt);
  rep.refined = run_level(kind, sym, eps, alpha, grid.refined(), workers, opt);
  rep.empirical_constant = std::max(rep.base.constant, rep.refined.constant);
  rep.stability_factor = stability(rep.base.constant, rep.refined.constant);
  return rep;
}

// ---------------------------------------------------------------------------------------
// auxiliary lemmas

std::string to_string(Lemma l) {
  switch (l) {
    case Lemma::mod: return "mod";
    case Lemma::lem4: return "lem4";
    case Lemma::lem1: return "lem1";
    case Lemma::oq: return "oq";
  }
  return "unknown";
}

Lemma lemma_from_string(const std::string& name) {
  if (name == "mod") return Lemma::mod;
  if (name == "lem4") return Lemma::lem4;
  if (name == "lem1") return Lemma::lem1;
  if (name == "oq") return Lemma::oq;
  throw std::invalid_argument("unknown lemma '" + name + "' (expected mod, lem4, lem1 or oq)");
}

void LemmaParams::validate(Lemma l) const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("lemma hypothesis violated: " + what); };
  const std::size_t d = alpha.dim();
  switch (l) {
    case Lemma::mod:
      if (!(a > 1.0)) fail("a > 1");
      return;
    case Lemma::oq:
      if (!(b >= 0.0)) fail("b >= 0");
      if (!(c > 0.0)) fail("c > 0");
      return;
    case Lemma::lem4:
      if (delta.size() != d || kappa.size() != d) fail("delta and kappa must have dimension d");
      for (std::size_t j = 0; j < d; ++j) {
        if (!(delta[j] >= 0.0)) fail("delta >= 0");
        if (!(kappa[j] >= 0.0)) fail("kappa >= 0");
      }
      break;
    case Lemma::lem1:
      if (eps.dim() != d || xi.dim() != d || rho.dim() != d) fail("eps, xi, rho must have dimension d");
      for (std::size_t j = 0; j < d; ++j) {
        if (xi[j] > eps[j]) fail("xi <= eps");
        if (rho[j] > eps[j]) fail("rho <= eps");
      }
      if (!(u >= 1.0)) fail("u >= 1");
      if (!(C > 0.0)) fail("C > 0");
      break;
  }
  if (grid) {
    for (const Point& c : grid->centers) {
      if (c.size() != d) fail("grid dimension must equal d");
    }
  }
  if (single_pair && (single_pair->first.size() != d || single_pair->second.size() != d)) {
    fail("sample pair dimension must equal d");
  }
}

namespace {

// int_0^1 (1 - z^2)^{-1/2} z^{-a} exp(-T/z) extra(z) dz with z = sin(theta), theta = e^w
template <class Extra>
double zeta_integral(double a, double T, Extra&& extra, double rel_tol) {
  const double top = 0.5 * std::numbers::pi;
  const double th_lo = std::min(T / 1000.0, 0.25 * top);
  auto f = [&](double w) {
    const double th = std::exp(w);
    const double z = std::sin(th);
    return std::exp(-a * std::log(z) - T / z + w) * extra(z);
  };
  std::vector<double> br{std::log(th_lo), std::log(top)};
  const double peak = T / std::max(a - 1.0, 0.5);
  for (double s : {0.1 * peak, peak, 10.0 * peak, 0.5}) {
    if (s > th_lo && s < top) br.push_back(std::log(s));
  }
  return quad::integrate(f, br, {.abs_tol = 0.0, .rel_tol = rel_tol, .max_intervals = 4000}).value;
}

// int phi(sum_j c_j (1 + s_j)) Pi_beta(ds) over [-1,1]^d, axis by axis. The endpoint factors
// (1 -+ s)^{beta - 1/2} are removed by s = -+1 +- rho^{1/(beta + 1/2)}.
class PiIntegrator {
public:
  PiIntegrator(std::vector<double> beta, std::vector<double> c, double rel_tol)
      : beta_(std::move(beta)), c_(std::move(c)), rel_tol_(rel_tol) {}

  template <class Phi>
  double operator()(Phi&& phi, double scale_hint) const {
    return axis(0, 0.0, phi, scale_hint);
  }

private:
  std::vector<double> beta_;
  std::vector<double> c_;
  double rel_tol_;

  template <class Phi>
  double axis(std::size_t j, double acc, Phi& phi, double hint) const {
    if (j == beta_.size()) return phi(acc);
    const double b = beta_[j];
    const double c = c_[j];
    auto next = [&](double s) { return axis(j + 1, acc + c * (1.0 + s), phi, hint); };
    if (b == -0.5) return (next(-1.0) + next(1.0)) / std::sqrt(2.0 * std::numbers::pi);

    const double g = b + 0.5;
    const double norm = std::sqrt(std::numbers::pi) * std::pow(2.0, b) * std::tgamma(g);
    const quad::AdaptiveOptions ao{.abs_tol = 0.0, .rel_tol = rel_tol_, .max_intervals = 2000};
    // s = -1 + rho^{1/g}: the sharp feature sits where c (1 + s) is comparable to the hint
    auto left = [&](double r) {
      const double u = std::pow(r, 1.0 / g);
      return next(-1.0 + u) * std::pow(2.0 - u, b - 0.5);
    };
    auto right = [&](double r) {
      const double u = std::pow(r, 1.0 / g);
      return next(1.0 - u) * std::pow(2.0 - u, b - 0.5);
    };
    std::vector<double> br{0.0, 1.0};
    if (c > 0.0) {
      for (double f : {0.01, 0.1, 1.0, 10.0}) {
        const double rc = std::pow(f * hint / c, g);
        if (rc > 0.0 && rc < 1.0) br.push_back(rc);
      }
    }
    const double l = quad::integrate(left, br, ao).value;
    const double r = quad::integrate(right, {0.0, 1.0}, ao).value;
    return (l + r) / (g * norm);
  }
};

struct PairSet {
  std::vector<std::pair<Point, Point>> base;
  std::vector<std::pair<Point, Point>> refined;
};

PairSet lemma_pairs(const LemmaParams& p) {
  if (p.single_pair) return {{*p.single_pair}, {*p.single_pair}};
  SweepGrid g = SweepGrid::standard(p.alpha.dim());
  g.per_decade = 4;
  if (p.grid) g = *p.grid;
  return {g.pairs(), g.refined().pairs()};
}

std::vector<double> concat(const Point& x, const Point& y) {
  std::vector<double> v = x;
  v.insert(v.end(), y.begin(), y.end());
  return v;
}

double lem4_ratio(const LemmaParams& p, const Point& x, const Point& y, double rel_tol) {
  const std::size_t d = x.size();
  std::vector<double> beta(d), c(d);
  double pre = 1.0;
  double power = static_cast<double>(d) + p.alpha.norm1();
  for (std::size_t j = 0; j < d; ++j) {
    beta[j] = p.alpha[j] + p.delta[j] + p.kappa[j];
    c[j] = 2.0 * x[j] * y[j];
    pre *= std::pow(x[j] + y[j], 2.0 * p.delta[j]);
    power += p.delta[j];
  }
  if (p.gradient_form) power += 0.5;
  const double r2 = dist2(x, y);
  const double r = std::sqrt(r2);
  const double integral = PiIntegrator(beta, c, rel_tol)([&](double acc) { return std::pow(r2 + acc, -power); }, r2);
  double ratio = pre * integral * measure_ball(x, r, p.alpha);
  if (p.gradient_form) ratio *= r;
  return ratio;
}

// For fixed zeta the exponent is linear in sum_j c_j (1 + s_j), so the Pi_beta integral splits
// into int e^{-z(1+s)} Pi_b(ds) = e^{-z} z^{-b} I_b(z) per axis, z = C (1/zeta - zeta) c_j / 4.
double lem1_ratio(const LemmaParams& p, const Point& x, const Point& y, double rel_tol) {
  const std::size_t d = x.size();
  std::vector<double> beta(d), c(d);
  double pre = 1.0;
  double a = static_cast<double>(d) + p.alpha.norm1() + p.eps.norm1() - 0.5 * p.xi.norm1() - 0.5 * p.rho.norm1() +
             0.5 * p.u + 0.5;
  double plus2 = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    beta[j] = p.alpha[j] + p.eps[j];
    c[j] = 2.0 * x[j] * y[j];
    pre *= std::pow(x[j], p.eps[j] - p.xi[j]) * std::pow(y[j], p.eps[j] - p.rho[j]);
    plus2 += (x[j] + y[j]) * (x[j] + y[j]);
  }
  const double r2 = dist2(x, y);
  const double r = std::sqrt(r2);
  auto extra = [&](double z) {
    const double kappa = 0.25 * p.C * (1.0 / z - z);
    double v = std::exp(-0.25 * p.C * z * plus2);
    for (std::size_t j = 0; j < d; ++j) v *= special::bessel_i_over_power_scaled(beta[j], kappa * c[j]);
    return v;
  };
  const double norm = pre * zeta_integral(a, 0.25 * p.C * r2, extra, rel_tol);
  return norm * std::pow(r, p.u - 1.0) * measure_ball(x, r, p.alpha);
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  const int n = static_cast<int>(std::ceil(per_decade * std::log10(hi / lo)));
  std::vector<double> v;
  for (int i = 0; i <= n; ++i) v.push_back(lo * std::pow(hi / lo, double(i) / n));
  return v;
}

}  // namespace

double lemma_mod_integral(double a, double T, double rel_tol) {
  if (!(a > 1.0)) throw std::invalid_argument("lemma hypothesis violated: a > 1");
  if (!(T > 0.0)) throw std::invalid_argument("lemma mod: T must be positive");
  return zeta_integral(a, T, [](double) { return 1.0; }, rel_tol);
}

bool LemmaReport::passed() const {
  return std::isfinite(constant) && std::isfinite(refined_constant) && stability_factor < 2.0;
}

LemmaReport verify_lemma(Lemma lemma, const LemmaParams& params, int workers) {
  params.validate(lemma);
  LemmaReport rep;
  rep.lemma = lemma;

  auto fill = [&](std::vector<LemmaRow>& rows, auto&& ratio_of) {
    parallel_for(rows.size(), workers, [&](std::size_t i) { rows[i].ratio = ratio_of(rows[i].inputs); });
  };

  switch (lemma) {
    case Lemma::mod: {
      for (int level = 0; level < 2; ++level) {
        auto& rows = level == 0 ? rep.base : rep.refined;
        for (double T : log_grid(1e-3, 1e3, level == 0 ? 3 : 6)) rows.push_back({{T}, 0.0});
        const double tol = level == 0 ? 1e-8 : 1e-11;
        fill(rows, [&](const std::vector<double>& in) {
          return lemma_mod_integral(params.a, in[0], tol) * std::pow(in[0], params.a - 1.0);
        });
      }
      break;
    }
    case Lemma::oq: {
      for (int level = 0; level < 2; ++level) {
        auto& rows = level == 0 ? rep.base : rep.refined;
        const int pd = level == 0 ? 3 : 6;
        for (double A : log_grid(1e-3, 1e3, pd)) {
          rows.push_back({{A, 0.0}, 0.0});
          for (double q : log_grid(1e-4, 1e4, pd)) rows.push_back({{A, q}, 0.0});
        }
        fill(rows, [&](const std::vector<double>& in) {
          const double A = in[0];
          const double q = in[1];
          // q^b e^{-cAq} / (A^{-b} e^{-cAq/2})
          if (q == 0.0) return params.b == 0.0 ? 1.0 : 0.0;
          return std::exp(params.b * std::log(A * q) - 0.5 * params.c * A * q);
        });
      }
      break;
    }
    case Lemma::lem4:
    case Lemma::lem1: {
      const PairSet ps = lemma_pairs(params);
      for (int level = 0; level < 2; ++level) {
        const auto& pairs = level == 0 ? ps.base : ps.refined;
        auto& rows = level == 0 ? rep.base : rep.refined;
        for (const auto& [x, y] : pairs) rows.push_back({concat(x, y), 0.0});
        const double tol = level == 0 ? 1e-7 : 1e-10;
        const std::size_t d = params.alpha.dim();
        fill(rows, [&](const std::vector<double>& in) {
          const Point x(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(d));
          const Point y(in.begin() + static_cast<std::ptrdiff_t>(d), in.end());
          return lemma == Lemma::lem4 ? lem4_ratio(params, x, y, tol) : lem1_ratio(params, x, y, tol);
        });
      }
      break;
    }
  }
  for (const auto& r : rep.base) rep.constant = std::max(rep.constant, r.ratio);
  for (const auto& r : rep.refined) rep.refined_constant = std::max(rep.refined_constant, r.ratio);
  rep.stability_factor = stability(rep.constant, rep.refined_constant);
  return rep;
}

}  // namespace dunkl
