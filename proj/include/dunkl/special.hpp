#ifndef DUNKL_SPECIAL_HPP
#define DUNKL_SPECIAL_HPP

#include <complex>

namespace dunkl::special {

/// Laguerre polynomial L_k^a(u) from the three-term recurrence
/// (k+1) L_{k+1} = (2k+1+a-u) L_k - (k+a) L_{k-1}.
double laguerre(int k, double a, double u);

/// sqrt(k! / Gamma(k+a+1)) * L_k^a(u), evaluated by the normalized recurrence so that large
/// degrees neither overflow nor lose the normalization.
double laguerre_normalized(int k, double a, double u);

/// log(I_nu(z) / z^nu) for nu >= -1/2 and z >= 0. Ascending series below the switchover,
/// Hankel expansion with e^z factored out above it.
double log_bessel_i_over_power(double nu, double z);

/// I_nu(z) / z^nu; finite at z = 0 where it equals 2^{-nu} / Gamma(nu+1).
double bessel_i_over_power(double nu, double z);

/// e^{-z} I_nu(z) / z^nu
double bessel_i_over_power_scaled(double nu, double z);

/// I_nu(z) for z > 0.
double bessel_i(double nu, double z);

/// I_{nu+1}(z) / (z I_nu(z)); equals 1/(2(nu+1)) at z = 0.
double bessel_i_ratio_over_z(double nu, double z);
/// 1 - I_{nu+1}(z)/I_nu(z), accurate also when the ratio is close to 1 (large z).
double bessel_i_ratio_complement(double nu, double z);

/// Argument below which the ascending series is used.
double bessel_series_switchover(double nu);

/// log Gamma for complex arguments (principal branch of the real part, Lanczos g = 7).
std::complex<double> lgamma(std::complex<double> z);
std::complex<double> tgamma(std::complex<double> z);

}  // namespace dunkl::special

#endif  // DUNKL_SPECIAL_HPP
