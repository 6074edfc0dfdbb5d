#include "dunkl/multipliers.hpp"

#include "dunkl/expression.hpp"
#include "dunkl/quadrature.hpp"
#include "dunkl/special.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dunkl {

namespace {

constexpr double kDivergenceThreshold = 1e100;

// Quadrature of g over (lo, hi) for a density piece. The first stretch of length `head` uses
// t = lo + tau^{1/(p+1)}, which cancels a declared (t-lo)^p endpoint behaviour; the rest is
// covered by doubling panels until they stop contributing.
template <class G>
auto integrate_piece(const DensityPiece& piece, double head, G&& g, bool* diverged) {
  using T = std::decay_t<decltype(g(1.0))>;
  const double p1 = piece.lo_power + 1.0;
  if (!(p1 > 0.0)) throw std::invalid_argument("density piece: endpoint power must exceed -1");
  const double span = piece.hi - piece.lo;
  if (!(span > 0.0)) throw std::invalid_argument("density piece: empty support");
  const double first = std::min(span, head);
  quad::AdaptiveOptions opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-300;
  auto substituted = [&](double tau) {
    if (tau <= 0.0) return T{};
    const double r = std::pow(tau, 1.0 / p1);
    return g(piece.lo + r) * (r / (tau * p1));
  };
  T total = quad::integrate(substituted, {0.0, std::pow(first, p1)}, opt).value;
  double a = first;
  for (int k = 0; k < 80 && a < span; ++k) {
    const double b = std::min(span, 2.0 * a);
    const T part = quad::integrate([&](double r) { return g(piece.lo + r); }, {a, b}, opt).value;
    total += part;
    if (!std::isfinite(std::abs(total)) || std::abs(total) > kDivergenceThreshold) {
      if (diverged) *diverged = true;
      return total;
    }
    if (std::abs(part) <= 1e-17 * std::abs(total) && b >= 64.0 * first) return total;
    a = b;
  }
  if (a < span && diverged) *diverged = true;
  return total;
}

}  // namespace

Complex laplace_symbol_eval(const LaplaceSymbol& sym, double z) {
  if (!(z > 0.0)) throw std::domain_error("laplace symbol: z must be positive");
  // s = t z = e^v: m(z) = int e^{-e^v} e^v eta(e^v / z) dv
  auto f = [&](double v) {
    const double s = std::exp(v);
    return std::exp(v - s) * sym.eta(s / z);
  };
  quad::AdaptiveOptions opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-16 * sym.eta_bound;
  const auto r = quad::integrate(f, {-46.0, -30.0, -15.0, -5.0, -1.0, 0.0, 1.0, 2.5, 4.6}, opt);
  if (!(r.error <= 1e-8 * std::max(std::abs(r.value), sym.eta_bound))) {
    throw std::runtime_error("laplace symbol: quadrature did not converge");
  }
  return r.value;
}

double check_eta_bound(const LaplaceSymbol& sym) {
  double worst = 0.0;
  for (int i = 0; i <= 640; ++i) {
    const double t = std::pow(10.0, -8.0 + 16.0 * i / 640.0);
    const double v = std::abs(sym.eta(t));
    if (!std::isfinite(v)) throw std::invalid_argument("laplace symbol: eta is not finite on (0, inf)");
    worst = std::max(worst, v);
  }
  if (worst > sym.eta_bound * (1.0 + 1e-12)) {
    throw std::invalid_argument("laplace symbol: |eta| exceeds its declared bound");
  }
  return worst;
}

double meas_integral(const StieltjesSymbol& sym, double lambda0) {
  if (!(lambda0 > 0.0)) throw std::domain_error("meas: lambda0 must be positive");
  double total = 0.0;
  for (const Atom& a : sym.atoms) {
    if (!(a.t > 0.0)) throw InvalidSymbol("stieltjes symbol: atoms must sit in (0, inf)");
    total += std::abs(a.weight) * std::exp(-a.t * lambda0);
  }
  for (const DensityPiece& piece : sym.densities) {
    if (!(piece.lo >= 0.0)) throw InvalidSymbol("stieltjes symbol: density support must lie in (0, inf)");
    bool diverged = false;
    const double part = integrate_piece(
        piece, 1.0 / lambda0,
        [&](double t) { return std::abs(piece.density(t)) * std::exp(-t * lambda0); }, &diverged);
    if (diverged || !std::isfinite(part)) {
      throw InvalidSymbol("stieltjes symbol: int e^{-t lambda0} d|mu| diverges");
    }
    total += part;
  }
  if (!std::isfinite(total) || total > kDivergenceThreshold) {
    throw InvalidSymbol("stieltjes symbol: int e^{-t lambda0} d|mu| diverges");
  }
  return total;
}

Complex stieltjes_symbol_eval(const StieltjesSymbol& sym, double z) {
  meas_integral(sym, z);
  Complex total = 0.0;
  for (const Atom& a : sym.atoms) total += a.weight * std::exp(-a.t * z);
  for (const DensityPiece& piece : sym.densities) {
    total += integrate_piece(piece, 1.0 / z, [&](double t) { return piece.density(t) * std::exp(-t * z); }, nullptr);
  }
  return total;
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::laplace: return "laplace";
    case Provenance::stieltjes: return "stieltjes";
    case Provenance::sqrt_laplace: return "sqrt-laplace";
    case Provenance::sqrt_stieltjes: return "sqrt-stieltjes";
  }
  return "unknown";
}

Provenance Symbol::provenance() const {
  const bool lap = std::holds_alternative<LaplaceSymbol>(data);
  if (sqrt) return lap ? Provenance::sqrt_laplace : Provenance::sqrt_stieltjes;
  return lap ? Provenance::laplace : Provenance::stieltjes;
}

Complex Symbol::operator()(double z) const {
  const double arg = sqrt ? std::sqrt(z) : z;
  if (const auto* l = std::get_if<LaplaceSymbol>(&data)) return laplace_symbol_eval(*l, arg);
  return stieltjes_symbol_eval(std::get<StieltjesSymbol>(data), arg);
}

namespace {

double parse_real(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("symbol: cannot parse " + what + " from '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("symbol: cannot parse " + what + " from '" + s + "'");
  }
  return v;
}

StieltjesSymbol atom_symbol(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("symbol: time parameter must be positive");
  StieltjesSymbol s;
  s.atoms.push_back({t, 1.0});
  s.closed_form = [t](double z) { return Complex(std::exp(-t * z)); };
  return s;
}

}  // namespace

Symbol make_symbol(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string params = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto need_params = [&]() {
    if (colon == std::string::npos || params.empty()) {
      throw std::invalid_argument("symbol '" + name + "' needs a parameter");
    }
  };

  Symbol out;
  out.name = spec;
  if (name == "identity") {
    LaplaceSymbol l;
    l.eta = [](double) { return Complex(1.0); };
    l.eta_bound = 1.0;
    l.closed_form = [](double) { return Complex(1.0); };
    out.data = l;
  } else if (name == "heat") {
    need_params();
    out.data = atom_symbol(parse_real(params, "time"));
  } else if (name == "poisson") {
    need_params();
    out.data = atom_symbol(parse_real(params, "time"));
    out.sqrt = true;
  } else if (name == "imaginary-power") {
    need_params();
    const double g = parse_real(params, "gamma");
    const Complex gamma_fn = special::tgamma(Complex(1.0, g));
    LaplaceSymbol l;
    l.eta = [g, gamma_fn](double t) { return std::exp(Complex(0.0, g * std::log(t))) / gamma_fn; };
    l.eta_bound = 1.0 / std::abs(gamma_fn);
    l.closed_form = [g](double z) { return std::exp(Complex(0.0, -g * std::log(z))); };
    out.data = l;
  } else if (name == "fractional") {
    need_params();
    const double delta = parse_real(params, "delta");
    if (!(delta > 0.0)) throw std::invalid_argument("symbol: fractional order must be positive");
    const double lg = std::lgamma(delta);
    StieltjesSymbol s;
    s.densities.push_back({[delta, lg](double t) { return Complex(std::exp((delta - 1.0) * std::log(t) - lg)); },
                           0.0, std::numeric_limits<double>::infinity(), delta - 1.0});
    s.closed_form = [delta](double z) { return Complex(std::pow(z, -delta)); };
    out.data = s;
  } else if (name == "laplace-eta") {
    need_params();
    LaplaceSymbol l;
    l.eta = expr::parse(params, "t");
    l.eta_bound = std::numeric_limits<double>::infinity();
    l.eta_bound = check_eta_bound(l);
    if (!(l.eta_bound > 0.0)) l.eta_bound = 1e-300;
    out.data = l;
  } else if (name == "stieltjes-atoms") {
    need_params();
    StieltjesSymbol s;
    std::stringstream ss(params);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("symbol: atoms are written t=weight");
      const double t = parse_real(item.substr(0, eq), "atom position");
      if (!(t > 0.0)) throw std::invalid_argument("symbol: atom positions must be positive");
      s.atoms.push_back({t, expr::parse_constant(item.substr(eq + 1))});
    }
    if (s.atoms.empty()) throw std::invalid_argument("symbol: empty atom list");
    out.data = s;
  } else {
    throw std::invalid_argument("unknown symbol '" + name + "'");
  }
  return out;
}

double SymbolOnSpectrum::sup_abs() const {
  double s = 0.0;
  for (const Complex& v : values) s = std::max(s, std::abs(v));
  return s;
}

SymbolOnSpectrum symbol_on_spectrum(const Symbol& sym, const MultiplicityIndex& alpha, int max_n) {
  if (max_n < 0) throw std::invalid_argument("symbol_on_spectrum: negative degree");
  SymbolOnSpectrum out;
  out.alpha = alpha;
  out.provenance = sym.provenance();
  if (const auto* s = std::get_if<StieltjesSymbol>(&sym.data)) {
    const double l0 = eigenvalue(0, alpha);
    meas_integral(*s, sym.sqrt ? std::sqrt(l0) : l0);
  }
  out.values.reserve(static_cast<std::size_t>(max_n) + 1);
  for (int n = 0; n <= max_n; ++n) out.values.push_back(sym(eigenvalue(n, alpha)));
  return out;
}

SpectralCoefficients apply_on_coefficients(const SymbolOnSpectrum& m, SpectralCoefficients c) {
  for (std::size_t i = 0; i < c.size(); ++i) c.values[i] *= m.at(c.indices[i].norm1());
  return c;
}

SpectralCoefficients apply_multiplier(const Symbol& sym, const Function& f, const MultiplicityIndex& alpha,
                                      int cutoff) {
  return apply_on_coefficients(symbol_on_spectrum(sym, alpha, cutoff), expand(f, alpha, cutoff, Domain::full));
}

SpectralCoefficients apply_multiplier_component(const Symbol& sym, const ParityVector& eps, const Function& f,
                                                const MultiplicityIndex& alpha, int cutoff,
                                                const std::optional<ExpansionQuadrature>& quadrature) {
  if (eps.dim() != alpha.dim()) throw std::invalid_argument("apply_multiplier_component: dimension mismatch");
  return apply_on_coefficients(symbol_on_spectrum(sym, alpha, cutoff),
                               expand(f, alpha, cutoff, Domain::positive, quadrature, eps));
}

SpectralCoefficients apply_sqrt_multiplier(Symbol sym, const Function& f, const MultiplicityIndex& alpha,
                                           int cutoff, const std::optional<ParityVector>& eps) {
  sym.sqrt = true;
  if (eps) return apply_multiplier_component(sym, *eps, f, alpha, cutoff);
  return apply_multiplier(sym, f, alpha, cutoff);
}

double laguerre_function(const MultiIndex& k, const MultiplicityIndex& alpha, std::span<const double> x) {
  if (k.dim() != alpha.dim() || x.size() != alpha.dim()) {
    throw std::invalid_argument("laguerre_function: dimension mismatch");
  }
  double v = std::pow(2.0, 0.5 * static_cast<double>(alpha.dim()));
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < 0.0) throw std::domain_error("laguerre_function: point outside the positive cone");
    v *= hermite_1d(2 * k[j], alpha[j], x[j]);
  }
  return v;
}

LaguerreCoefficients laguerre_expand(const Function& f, const MultiplicityIndex& alpha, int cutoff,
                                     const std::optional<ExpansionQuadrature>& quadrature) {
  const std::size_t d = alpha.dim();
  const ExpansionQuadrature q = quadrature ? *quadrature : default_expansion_quadrature(alpha, 2 * cutoff);
  const SpectralCoefficients h =
      expand(f, alpha, 2 * cutoff, Domain::positive, q, ParityVector::zero(d));
  const double scale = std::pow(2.0, 0.5 * static_cast<double>(d));
  LaguerreCoefficients out;
  out.alpha = alpha;
  out.cutoff = cutoff;
  for (const MultiIndex& k : enumerate_multi_indices(d, cutoff)) {
    std::vector<int> twice(d);
    for (std::size_t j = 0; j < d; ++j) twice[j] = 2 * k[j];
    out.indices.push_back(k);
    out.values.push_back(scale * h.at(MultiIndex(twice)));
  }
  return out;
}

LaguerreCoefficients apply_laguerre_multiplier(const Symbol& sym, const Function& f, const MultiplicityIndex& alpha,
                                               int cutoff, const std::optional<ExpansionQuadrature>& quadrature) {
  LaguerreCoefficients c = laguerre_expand(f, alpha, cutoff, quadrature);
  const SymbolOnSpectrum m = symbol_on_spectrum(sym, alpha, 2 * cutoff);
  for (std::size_t i = 0; i < c.indices.size(); ++i) c.values[i] *= m.at(2 * c.indices[i].norm1());
  return c;
}

Complex synthesize(const LaguerreCoefficients& c, std::span<const double> x) {
  const std::size_t d = c.alpha.dim();
  if (x.size() != d) throw std::invalid_argument("synthesize: dimension mismatch");
  std::vector<std::vector<double>> tables(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (x[j] < 0.0) throw std::domain_error("synthesize: point outside the positive cone");
    tables[j] = hermite_1d_table(2 * c.cutoff, c.alpha[j], x[j]);
  }
  const double scale = std::pow(2.0, 0.5 * static_cast<double>(d));
  Complex sum = 0.0;
  for (std::size_t i = 0; i < c.indices.size(); ++i) {
    double v = scale;
    for (std::size_t j = 0; j < d; ++j) v *= tables[j][2 * c.indices[i][j]];
    sum += c.values[i] * v;
  }
  return sum;
}

double heat_tail_weight(double t, const MultiplicityIndex& alpha, int cutoff) {
  return std::exp(-t * eigenvalue(cutoff + 1, alpha));
}

}  // namespace dunkl
