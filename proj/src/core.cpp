#include "dunkl/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dunkl {

MultiplicityIndex::MultiplicityIndex(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.empty()) throw std::invalid_argument("multiplicity index must have dimension >= 1");
  for (double a : alpha_) {
    if (!std::isfinite(a) || a < -0.5) throw std::invalid_argument("alpha below -1/2");
  }
}

MultiplicityIndex MultiplicityIndex::uniform(std::size_t d, double a) {
  return MultiplicityIndex(std::vector<double>(d, a));
}

double MultiplicityIndex::norm1() const {
  return std::accumulate(alpha_.begin(), alpha_.end(), 0.0);
}

ParityVector::ParityVector(std::vector<int> eps) : eps_(std::move(eps)) {
  for (int e : eps_) {
    if (e != 0 && e != 1) throw std::invalid_argument("parity vector entries must be 0 or 1");
  }
}

ParityVector ParityVector::zero(std::size_t d) { return ParityVector(std::vector<int>(d, 0)); }

std::vector<ParityVector> ParityVector::all(std::size_t d) {
  std::vector<ParityVector> out;
  out.reserve(std::size_t{1} << d);
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    std::vector<int> e(d);
    for (std::size_t j = 0; j < d; ++j) e[j] = static_cast<int>((mask >> j) & 1U);
    out.emplace_back(std::move(e));
  }
  return out;
}

int ParityVector::norm1() const { return std::accumulate(eps_.begin(), eps_.end(), 0); }

MultiIndex::MultiIndex(std::vector<int> k) : k_(std::move(k)) {
  for (int v : k_) {
    if (v < 0) throw std::invalid_argument("multi-index entries must be nonnegative");
  }
}

int MultiIndex::norm1() const { return std::accumulate(k_.begin(), k_.end(), 0); }

namespace {

void enumerate_with_norm(std::size_t d, int n, std::vector<int>& prefix,
                         std::vector<MultiIndex>& out) {
  if (prefix.size() + 1 == d) {
    prefix.push_back(n);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int k = n; k >= 0; --k) {
    prefix.push_back(k);
    enumerate_with_norm(d, n - k, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_multi_indices(std::size_t d, int cutoff) {
  if (d == 0) throw std::invalid_argument("dimension must be positive");
  std::vector<MultiIndex> out;
  std::vector<int> prefix;
  for (int n = 0; n <= cutoff; ++n) {
    std::size_t first = out.size();
    enumerate_with_norm(d, n, prefix, out);
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end());
  }
  return out;
}

PowerWeight::PowerWeight(std::vector<double> delta) : delta_(std::move(delta)) {
  for (double v : delta_) {
    if (!std::isfinite(v)) throw std::invalid_argument("power weight exponents must be finite");
  }
}

double PowerWeight::operator()(std::span<const double> x) const {
  if (x.size() != delta_.size()) throw std::invalid_argument("power weight: dimension mismatch");
  double u = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) u *= std::pow(x[j], delta_[j]);
  return u;
}

Point reflect(std::span<const double> x, std::size_t axis) {
  if (axis < 1 || axis > x.size()) throw std::out_of_range("reflect: axis out of range");
  Point y(x.begin(), x.end());
  y[axis - 1] = -y[axis - 1];
  return y;
}

ParityVector parity_class(const MultiIndex& k) {
  std::vector<int> e(k.dim());
  for (std::size_t j = 0; j < k.dim(); ++j) e[j] = k[j] % 2;
  return ParityVector(std::move(e));
}

bool in_parity_class(const MultiIndex& k, const ParityVector& eps) {
  if (k.dim() != eps.dim()) return false;
  for (std::size_t j = 0; j < k.dim(); ++j) {
    if (k[j] % 2 != eps[j]) return false;
  }
  return true;
}

double eigenvalue(int n, const MultiplicityIndex& alpha) {
  if (n < 0) throw std::invalid_argument("eigenvalue: negative degree");
  return 2.0 * n + 2.0 * alpha.norm1() + 2.0 * static_cast<double>(alpha.dim());
}

Complex epsilon_project(const Function& f, const ParityVector& eps, std::span<const double> x) {
  const std::size_t d = eps.dim();
  if (x.size() != d) throw std::invalid_argument("epsilon_project: dimension mismatch");
  Point y(d);
  Complex sum = 0.0;
  // fixed order over eta so that the result does not depend on evaluation schedule
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    int sign = 1;
    for (std::size_t j = 0; j < d; ++j) {
      const bool flip = (mask >> j) & 1U;
      y[j] = flip ? -x[j] : x[j];
      if (flip && eps[j] == 1) sign = -sign;
    }
    sum += static_cast<double>(sign) * f(y);
  }
  return sum / static_cast<double>(std::size_t{1} << d);
}

Function epsilon_projection(Function f, ParityVector eps) {
  return [f = std::move(f), eps = std::move(eps)](std::span<const double> x) {
    return epsilon_project(f, eps, x);
  };
}

double t_of_zeta(double zeta) {
  if (!(zeta > 0.0 && zeta < 1.0)) throw std::domain_error("t_of_zeta: zeta outside (0,1)");
  return std::atanh(zeta);
}

double zeta_of_t(double t) {
  if (!(t > 0.0)) throw std::domain_error("zeta_of_t: t must be positive");
  return std::tanh(t);
}

Box ball_box(std::span<const double> x, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("ball radius must be positive");
  const double half = r / std::sqrt(static_cast<double>(x.size()));
  Box b{std::vector<double>(x.size()), std::vector<double>(x.size())};
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < 0.0) throw std::invalid_argument("ball center outside the positive cone");
    b.lo[j] = std::max(0.0, x[j] - half);
    b.hi[j] = x[j] + half;
  }
  return b;
}

namespace {

// int_a^b x^s dx for 0 <= a < b; +inf when the integral diverges at 0.
double power_integral(double a, double b, double s) {
  if (a == 0.0 && s <= -1.0) return std::numeric_limits<double>::infinity();
  if (s == -1.0) return std::log(b / a);
  return (std::pow(b, s + 1.0) - std::pow(a, s + 1.0)) / (s + 1.0);
}

// average of prod_j x_j^{s_j} over the box against w_alpha^+
double box_power_average(const Box& box, const std::vector<double>& s,
                         const MultiplicityIndex& alpha) {
  double avg = 1.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double m = 2.0 * alpha[j] + 1.0;
    const double den = power_integral(box.lo[j], box.hi[j], m);
    if (!(den > 0.0)) throw std::domain_error("degenerate ball (zero measure)");
    avg *= power_integral(box.lo[j], box.hi[j], s[j] + m) / den;
  }
  return avg;
}

}  // namespace

double box_measure(const Box& box, const MultiplicityIndex& alpha) {
  if (box.lo.size() != alpha.dim() || box.hi.size() != alpha.dim()) {
    throw std::invalid_argument("box_measure: dimension mismatch");
  }
  double m = 1.0;
  for (std::size_t j = 0; j < alpha.dim(); ++j) {
    if (box.lo[j] < 0.0 || box.hi[j] < box.lo[j]) throw std::invalid_argument("box_measure: invalid box");
    const double e = 2.0 * alpha[j] + 2.0;
    m *= (std::pow(box.hi[j], e) - std::pow(box.lo[j], e)) / e;
  }
  return m;
}

double measure_ball(std::span<const double> x, double r, const MultiplicityIndex& alpha) {
  if (x.size() != alpha.dim()) throw std::invalid_argument("measure_ball: dimension mismatch");
  return box_measure(ball_box(x, r), alpha);
}

double ap_constant_estimate(const PowerWeight& weight, double p, const MultiplicityIndex& alpha,
                            const BallFamily& family) {
  if (!(p >= 1.0)) throw std::invalid_argument("A_p estimate requires p >= 1");
  if (weight.dim() != alpha.dim()) throw std::invalid_argument("A_p estimate: dimension mismatch");
  if (family.centers.size() != family.radii.size() || family.centers.empty()) {
    throw std::invalid_argument("A_p estimate: ball family must be finite and nonempty");
  }
  const std::vector<double>& delta = weight.exponents();
  const std::size_t d = delta.size();
  double best = 0.0;
  for (std::size_t b = 0; b < family.centers.size(); ++b) {
    const Box box = ball_box(family.centers[b], family.radii[b]);
    const double avg_u = box_power_average(box, delta, alpha);
    double second = 1.0;
    if (p == 1.0) {
      // ess sup of U^{-1}: a monotone power on each side, attained at an endpoint
      for (std::size_t j = 0; j < d; ++j) {
        if (delta[j] == 0.0) continue;
        const double at_lo =
            box.lo[j] == 0.0 ? (delta[j] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0)
                             : std::pow(box.lo[j], -delta[j]);
        second *= std::max(at_lo, std::pow(box.hi[j], -delta[j]));
      }
    } else {
      std::vector<double> dual(d);
      for (std::size_t j = 0; j < d; ++j) dual[j] = -delta[j] / (p - 1.0);
      second = std::pow(box_power_average(box, dual, alpha), p - 1.0);
    }
    const double q = avg_u * second;
    if (std::isnan(q)) return std::numeric_limits<double>::infinity();
    best = std::max(best, q);
  }
  return best;
}

std::string to_string(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

}  // namespace dunkl
