#ifndef DUNKL_BASIS_HPP
#define DUNKL_BASIS_HPP

#include "dunkl/core.hpp"
#include "dunkl/quadrature.hpp"

#include <optional>
#include <span>
#include <vector>

namespace dunkl {

/// L_k^a(u) by the stable three-term recurrence; a > -1, u >= 0.
double laguerre_poly(int k, double a, double u);

/// One-dimensional generalized Hermite function h_n^{a}(x), unit norm in L^2(R, |x|^{2a+1} dx):
///   h_{2k}   = (k!/Gamma(k+a+1))^{1/2} e^{-x^2/2} L_k^a(x^2)
///   h_{2k+1} = (k!/Gamma(k+a+2))^{1/2} e^{-x^2/2} x L_k^{a+1}(x^2)
double hermite_1d(int n, double a, double x);

/// h_0 .. h_n at one point (shares the Laguerre recurrences).
std::vector<double> hermite_1d_table(int n, double a, double x);

/// Tensor product h_k^alpha(x).
double hermite_nd(const MultiIndex& k, const MultiplicityIndex& alpha, std::span<const double> x);

/// Dunkl operator T_j^alpha f(x) with a 4th-order central difference for the partial derivative.
/// `axis` is 1-based; x_j must be nonzero.
Complex dunkl_derivative(const Function& f, std::size_t axis, const MultiplicityIndex& alpha,
                         std::span<const double> x);

/// (-Delta_alpha + |x|^2) f(x) with finite-difference derivatives; all coordinates nonzero.
Complex oscillator_apply(const Function& f, const MultiplicityIndex& alpha,
                         std::span<const double> x);

enum class Domain { full, positive };

/// Truncated generalized Hermite expansion. For Domain::positive the coefficients are the
/// positive-cone pairings <f, h_k>_{dw_alpha^+}.
struct SpectralCoefficients {
  MultiplicityIndex alpha;
  int cutoff = 0;
  Domain domain = Domain::full;
  std::vector<MultiIndex> indices;
  std::vector<Complex> values;

  /// coefficient for k, zero if k is not stored
  Complex at(const MultiIndex& k) const;
  std::size_t size() const { return indices.size(); }
};

/// Per-axis quadrature rules on (0, inf) carrying the weight x^{2 alpha_j + 1}.
struct ExpansionQuadrature {
  std::vector<quad::Rule> axes;
};

/// Default half-line rules: generalized Gauss-Laguerre after u = x^2 with max(2N+20, min_nodes)
/// nodes per axis.
ExpansionQuadrature default_expansion_quadrature(const MultiplicityIndex& alpha, int cutoff,
                                                 int min_nodes = 0);

/// Rules for functions supported in the box prod_j [lo_j, hi_j] of the positive cone.
ExpansionQuadrature box_expansion_quadrature(const MultiplicityIndex& alpha,
                                             std::span<const double> lo,
                                             std::span<const double> hi, int nodes_per_axis);

/// Coefficients <f, h_k> for |k| <= cutoff. With `only_parity`, only k in N_eps are stored.
SpectralCoefficients expand(const Function& f, const MultiplicityIndex& alpha, int cutoff,
                            Domain domain,
                            const std::optional<ExpansionQuadrature>& quadrature = std::nullopt,
                            const std::optional<ParityVector>& only_parity = std::nullopt);

/// sum_k c_k h_k^alpha(x)
Complex synthesize(const SpectralCoefficients& c, std::span<const double> x);

/// Euclidean norm of the coefficient vector (the L^2(dw_alpha) norm of a full-domain expansion).
double coefficient_norm(const SpectralCoefficients& c);

/// L^2(dw_alpha) inner product <h_k, h_m> computed on the default rule; used by orthonormality checks.
double basis_inner_product(const MultiIndex& k, const MultiIndex& m, const MultiplicityIndex& alpha,
                           Domain domain);

}  // namespace dunkl

#endif  // DUNKL_BASIS_HPP
