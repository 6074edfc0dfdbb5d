#ifndef DUNKL_HEAT_KERNEL_HPP
#define DUNKL_HEAT_KERNEL_HPP

#include "dunkl/core.hpp"
#include "dunkl/quadrature.hpp"

#include <span>
#include <vector>

namespace dunkl {

/// I_nu(z) for nu >= -1/2, z > 0.
double bessel_i(double nu, double z);
/// I_nu(z) / z^nu, valid down to z = 0.
double bessel_i_over_power(double nu, double z);

/// Product measure Pi_beta on [-1,1]^d with density (1-s^2)^{beta-1/2} / (sqrt(pi) 2^beta
/// Gamma(beta+1/2)) per axis, and the two atoms (delta_{-1} + delta_1)/sqrt(2 pi) at beta = -1/2.
class PiMeasure {
public:
  PiMeasure(std::vector<double> beta, int order = 64);

  std::size_t dim() const { return beta_.size(); }
  const std::vector<double>& beta() const { return beta_; }
  const quad::Rule& axis(std::size_t j) const { return rules_[j]; }
  /// total mass of axis j as represented by the rule
  double mass(std::size_t j) const;
  /// 2^{-beta}/Gamma(beta+1)
  static double exact_mass(double beta);

private:
  std::vector<double> beta_;
  std::vector<quad::Rule> rules_;
};

struct QPair {
  double plus;
  double minus;
};

/// q_pm = |x|^2 + |y|^2 +- 2 sum_i x_i y_i s_i
QPair q_pm(std::span<const double> x, std::span<const double> y, std::span<const double> s);

struct HeatKernelQuery {
  double t = 1.0;
  Point x;
  Point y;
  MultiplicityIndex alpha;
  ParityVector eps;

  /// throws unless t > 0, dimensions agree and x, y lie in the open positive cone
  void validate() const;
};

/// G_t^{alpha,eps}(x,y) from the product of modified Bessel functions (log-space evaluation).
double heat_component_bessel(const HeatKernelQuery& q);
double log_heat_component_bessel(const HeatKernelQuery& q);

/// G_t^{alpha,eps}(x,y) as 2^{-d} ((1-z^2)/(2z))^{d+|alpha|+|eps|} (xy)^eps
/// int exp(-q_+/(4z) - z q_-/4) Pi_{alpha+eps}(ds), z = tanh t, on the quadrature of `pi`.
double heat_component_schlafli(const HeatKernelQuery& q, const PiMeasure& pi);
double heat_component_schlafli(const HeatKernelQuery& q, int order = 64);

/// Spectral sum over n <= cutoff restricted to k in N_eps.
double heat_component_series(const HeatKernelQuery& q, int cutoff);

/// The same spectral sum with every k_j <= cutoff, evaluated as a product of one-dimensional
/// sums (lambda_|k| splits over coordinates). Keeps relative accuracy where the d-dimensional
/// sum loses it to cancellation between axes.
double heat_component_series_factored(const HeatKernelQuery& q, int cutoff);

/// Smallest cutoff N with e^{-2t(N+1)} (N+1)^d <= tol; the spectral tail bound for d-dim sums.
int heat_series_cutoff(double t, std::size_t d, double tol);

/// Full kernel sum_eps G^{alpha,eps} at arbitrary points of R^d.
double heat_full(double t, std::span<const double> x, std::span<const double> y,
                 const MultiplicityIndex& alpha);

/// Unrestricted spectral sum over all |k| <= cutoff.
double heat_full_series(double t, std::span<const double> x, std::span<const double> y,
                        const MultiplicityIndex& alpha, int cutoff);

struct HeatDerivatives {
  double value = 0.0;
  double dt = 0.0;                 // d/dt G
  std::vector<double> grad_x;      // d/dx_j G
  std::vector<double> grad_x_dt;   // d/dx_j d/dt G
};

/// Closed-form time and space derivatives of the Bessel-product representation.
HeatDerivatives heat_component_derivatives(const HeatKernelQuery& q);

/// int_{R^d} G_t(x,z) G_s(z,y) dw_alpha(z) by tensor Gauss quadrature on [-R, R]^d.
double heat_semigroup_integral(double t, double s, std::span<const double> x,
                               std::span<const double> y, const MultiplicityIndex& alpha,
                               int nodes_per_half_axis = 160);

/// Subordinated kernel P_t^{alpha,eps}(x,y) = int_0^inf G_{t^2/(4u)}(x,y) e^{-u} du / sqrt(pi u).
double poisson_component(double t, std::span<const double> x, std::span<const double> y,
                         const MultiplicityIndex& alpha, const ParityVector& eps,
                         double rel_tol = 1e-12);

/// sum_{n <= cutoff} e^{-t sqrt(lambda_n)} sum_{|k|=n, k in N_eps} h_k(x) h_k(y)
double poisson_component_series(double t, std::span<const double> x, std::span<const double> y,
                                 const MultiplicityIndex& alpha, const ParityVector& eps,
                                 int cutoff);

}  // namespace dunkl

#endif  // DUNKL_HEAT_KERNEL_HPP
