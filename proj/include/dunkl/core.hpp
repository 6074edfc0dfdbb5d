#ifndef DUNKL_CORE_HPP
#define DUNKL_CORE_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace dunkl {

using Complex = std::complex<double>;
using Point = std::vector<double>;

/// A function on R^d (or on the positive cone) sampled pointwise.
using Function = std::function<Complex(std::span<const double>)>;

/// Multiplicity function alpha in [-1/2, inf)^d.
class MultiplicityIndex {
public:
  MultiplicityIndex() = default;
  explicit MultiplicityIndex(std::vector<double> alpha);

  /// alpha = (a, ..., a) in dimension d.
  static MultiplicityIndex uniform(std::size_t d, double a);

  std::size_t dim() const { return alpha_.size(); }
  double operator[](std::size_t j) const { return alpha_[j]; }
  const std::vector<double>& components() const { return alpha_; }
  /// |alpha| = alpha_1 + ... + alpha_d
  double norm1() const;

  bool operator==(const MultiplicityIndex&) const = default;

private:
  std::vector<double> alpha_;
};

/// eps in {0,1}^d selecting a symmetry component.
class ParityVector {
public:
  ParityVector() = default;
  explicit ParityVector(std::vector<int> eps);

  static ParityVector zero(std::size_t d);
  /// All 2^d parity vectors in lexicographic order (bit j of the counter is eps_j).
  static std::vector<ParityVector> all(std::size_t d);

  std::size_t dim() const { return eps_.size(); }
  int operator[](std::size_t j) const { return eps_[j]; }
  const std::vector<int>& components() const { return eps_; }
  /// number of odd coordinates
  int norm1() const;

  bool operator==(const ParityVector&) const = default;
  auto operator<=>(const ParityVector&) const = default;

private:
  std::vector<int> eps_;
};

class MultiIndex {
public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> k);

  std::size_t dim() const { return k_.size(); }
  int operator[](std::size_t j) const { return k_[j]; }
  const std::vector<int>& components() const { return k_; }
  int norm1() const;

  bool operator==(const MultiIndex&) const = default;
  auto operator<=>(const MultiIndex&) const = default;

private:
  std::vector<int> k_;
};

/// All k in N^d with |k| <= cutoff, ordered by |k| and then lexicographically.
std::vector<MultiIndex> enumerate_multi_indices(std::size_t d, int cutoff);

/// Power weight U(x) = prod_j x_j^{delta_j} on the open positive cone.
class PowerWeight {
public:
  PowerWeight() = default;
  explicit PowerWeight(std::vector<double> delta);

  std::size_t dim() const { return delta_.size(); }
  const std::vector<double>& exponents() const { return delta_; }
  double operator()(std::span<const double> x) const;

private:
  std::vector<double> delta_;
};

/// Flip the sign of coordinate `axis` (1-based).
Point reflect(std::span<const double> x, std::size_t axis);

/// eps_i = k_i mod 2; k belongs to N_eps for exactly this eps.
ParityVector parity_class(const MultiIndex& k);

/// True when every k_i has the parity eps_i.
bool in_parity_class(const MultiIndex& k, const ParityVector& eps);

/// lambda_n = 2n + 2|alpha| + 2d
double eigenvalue(int n, const MultiplicityIndex& alpha);

/// f_eps(x) = 2^{-d} sum_eta (-1)^{eps.eta} f(sigma^eta x).
Complex epsilon_project(const Function& f, const ParityVector& eps, std::span<const double> x);
Function epsilon_projection(Function f, ParityVector eps);

/// zeta = tanh t and its inverse t = atanh(zeta).
double t_of_zeta(double zeta);
double zeta_of_t(double t);

/// Product box standing in for the ball B(x, r) in the positive cone: each side is
/// [max(0, x_j - r/sqrt d), x_j + r/sqrt d].
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};
Box ball_box(std::span<const double> x, double r);

/// w_alpha^+ of a box in the closed positive cone.
double box_measure(const Box& box, const MultiplicityIndex& alpha);

/// w_alpha^+ of the product box around x with radius r.
double measure_ball(std::span<const double> x, double r, const MultiplicityIndex& alpha);

/// Finite ball family for the empirical A_p quotient.
struct BallFamily {
  std::vector<Point> centers;
  std::vector<double> radii;  // one per center
};

/// Max over the family of the A_p quotient of U against w_alpha^+. Returns +inf when
/// a quotient diverges (e.g. a non-integrable power at the origin).
double ap_constant_estimate(const PowerWeight& weight, double p, const MultiplicityIndex& alpha,
                            const BallFamily& family);

std::string to_string(const std::vector<double>& v);

}  // namespace dunkl

#endif  // DUNKL_CORE_HPP
