#ifndef DUNKL_MULTIPLIERS_HPP
#define DUNKL_MULTIPLIERS_HPP

#include "dunkl/basis.hpp"
#include "dunkl/core.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace dunkl {

using ComplexFn = std::function<Complex(double)>;

/// Raised when a Laplace-Stieltjes symbol violates the exponential integrability condition.
class InvalidSymbol : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// m(z) = z int_0^inf e^{-tz} eta(t) dt with |eta| <= eta_bound.
struct LaplaceSymbol {
  ComplexFn eta;
  double eta_bound = 1.0;
  std::optional<ComplexFn> closed_form;  // m(z), when known
};

/// Density piece of a measure on (lo, hi); hi may be +inf. Near lo the density may behave
/// like (t - lo)^{lo_power} with lo_power > -1; declaring it lets the quadrature absorb it.
struct DensityPiece {
  ComplexFn density;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  double lo_power = 0.0;
};

struct Atom {
  double t;
  Complex weight;
};

/// m(z) = sum_i c_i e^{-t_i z} + int e^{-tz} rho(t) dt
struct StieltjesSymbol {
  std::vector<Atom> atoms;
  std::vector<DensityPiece> densities;
  std::optional<ComplexFn> closed_form;
};

/// z int_0^inf e^{-tz} eta(t) dt; requires z > 0.
Complex laplace_symbol_eval(const LaplaceSymbol& sym, double z);

/// Checks eta against its declared bound on a log grid of t; returns the largest sampled |eta|.
double check_eta_bound(const LaplaceSymbol& sym);

/// int e^{-t lambda0} d|mu|(t); throws InvalidSymbol when the integral diverges numerically.
double meas_integral(const StieltjesSymbol& sym, double lambda0);

/// int e^{-tz} dmu(t); throws InvalidSymbol when the integrability check at z fails.
Complex stieltjes_symbol_eval(const StieltjesSymbol& sym, double z);

enum class Provenance { laplace, stieltjes, sqrt_laplace, sqrt_stieltjes };
std::string to_string(Provenance p);

/// A symbol from the registry: Laplace or Laplace-Stieltjes data, optionally evaluated at sqrt(z).
struct Symbol {
  std::string name;
  std::variant<LaplaceSymbol, StieltjesSymbol> data;
  bool sqrt = false;

  Provenance provenance() const;
  /// m(z), or m(sqrt z) for the square-root variants
  Complex operator()(double z) const;
};

/// Registry lookup. Names: identity, heat:t, poisson:t, imaginary-power:g, fractional:d,
/// laplace-eta:<expr in t>, stieltjes-atoms:<t=c,...>. Throws std::invalid_argument.
Symbol make_symbol(const std::string& spec);

/// m(lambda_n) for n = 0..max_n.
struct SymbolOnSpectrum {
  MultiplicityIndex alpha;
  Provenance provenance = Provenance::laplace;
  std::vector<Complex> values;

  Complex at(int n) const { return values.at(static_cast<std::size_t>(n)); }
  double sup_abs() const;
};

SymbolOnSpectrum symbol_on_spectrum(const Symbol& sym, const MultiplicityIndex& alpha, int max_n);

/// Multiply each c_k by m(lambda_|k|).
SpectralCoefficients apply_on_coefficients(const SymbolOnSpectrum& m, SpectralCoefficients c);

/// m(L) f truncated at |k| <= cutoff, returned in coefficient form (evaluate with synthesize).
SpectralCoefficients apply_multiplier(const Symbol& sym, const Function& f, const MultiplicityIndex& alpha,
                                      int cutoff);

/// m^{eps,+}(L) f: positive-cone pairings against h_k, k in N_eps. Only the values of f on
/// the positive cone enter; m(L) f = sum_eps 2^d m^{eps,+}(L) f_eps.
SpectralCoefficients apply_multiplier_component(const Symbol& sym, const ParityVector& eps, const Function& f,
                                                const MultiplicityIndex& alpha, int cutoff,
                                                const std::optional<ExpansionQuadrature>& quadrature = std::nullopt);

/// m(sqrt L) f on the full space, or m^{eps,+}(sqrt L) f when eps is given.
SpectralCoefficients apply_sqrt_multiplier(Symbol sym, const Function& f, const MultiplicityIndex& alpha,
                                           int cutoff, const std::optional<ParityVector>& eps = std::nullopt);

/// l_k(x) = 2^{d/2} h_{2k}(x) on the positive cone.
double laguerre_function(const MultiIndex& k, const MultiplicityIndex& alpha, std::span<const double> x);

/// Coefficients of m(L^l) f in the system l_k, |k| <= cutoff.
struct LaguerreCoefficients {
  MultiplicityIndex alpha;
  int cutoff = 0;
  std::vector<MultiIndex> indices;
  std::vector<Complex> values;
};

LaguerreCoefficients laguerre_expand(const Function& f, const MultiplicityIndex& alpha, int cutoff,
                                     const std::optional<ExpansionQuadrature>& quadrature = std::nullopt);
LaguerreCoefficients apply_laguerre_multiplier(const Symbol& sym, const Function& f, const MultiplicityIndex& alpha,
                                               int cutoff,
                                               const std::optional<ExpansionQuadrature>& quadrature = std::nullopt);
Complex synthesize(const LaguerreCoefficients& c, std::span<const double> x);

/// Spectral tail weight e^{-t lambda_{cutoff+1}} for semigroup-type symbols.
double heat_tail_weight(double t, const MultiplicityIndex& alpha, int cutoff);

}  // namespace dunkl

#endif  // DUNKL_MULTIPLIERS_HPP
