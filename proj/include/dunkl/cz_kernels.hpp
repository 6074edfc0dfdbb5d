#ifndef DUNKL_CZ_KERNELS_HPP
#define DUNKL_CZ_KERNELS_HPP

#include "dunkl/core.hpp"
#include "dunkl/multipliers.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dunkl {

struct KernelOptions {
  double rel_tol = 1e-10;  // relative to the integral of |integrand|
  int max_intervals = 3000;
};

struct KernelValue {
  Complex value;
  double abs_integral = 0.0;  // integral of |integrand|; the scale the tolerance refers to
  double error = 0.0;
};

/// K(x,y) = -int_0^inf d/dt G_t^{alpha,eps}(x,y) eta(t) dt, integrated in log t.
KernelValue kernel_laplace(const LaplaceSymbol& sym, const ParityVector& eps, std::span<const double> x,
                           std::span<const double> y, const MultiplicityIndex& alpha,
                           const KernelOptions& opt = {});

/// sum_i c_i G_{t_i}(x,y) + int G_t(x,y) rho(t) dt. Throws InvalidSymbol when the
/// integrability check fails.
KernelValue kernel_stieltjes(const StieltjesSymbol& sym, const ParityVector& eps, std::span<const double> x,
                             std::span<const double> y, const MultiplicityIndex& alpha,
                             const KernelOptions& opt = {});

/// Dispatches on the symbol type; square-root symbols are rejected.
KernelValue kernel(const Symbol& sym, const ParityVector& eps, std::span<const double> x,
                   std::span<const double> y, const MultiplicityIndex& alpha, const KernelOptions& opt = {});

struct KernelGradient {
  std::vector<Complex> grad_x;
  std::vector<Complex> grad_y;
  double abs_integral = 0.0;
};

/// Differentiated integrand for x; the y-gradient uses the symmetry G_t(x,y) = G_t(y,x).
KernelGradient kernel_gradient(const Symbol& sym, const ParityVector& eps, std::span<const double> x,
                               std::span<const double> y, const MultiplicityIndex& alpha,
                               const KernelOptions& opt = {});

/// <m^{eps,+}(L) f, g> computed spectrally (lhs) and as a double integral against the kernel (rhs).
struct DualityOptions {
  int expansion_nodes = 0;  // per axis; 0 picks max(200, 2N) (d=1) or max(60, 2N) (d>1)
  int kernel_nodes = 0;     // per axis; 0 picks 24 (d=1) or 16 (d>1)
  KernelOptions kernel;
  int workers = 1;
  // Disjoint supports give sum_n P_n = <f,g> = 0 for P_n = sum_{|k|=n} <f,h_k><h_k,g>, so the
  // tail sum_{n>N} m_n P_n can be replaced by sum_{n>N} (m_n - m_{N+1}) P_n. With the correction
  // lhs = sum_{n<=N} (m_n - m_{N+1}) P_n.
  bool tail_correction = true;
};

struct DualityResult {
  Complex lhs;
  Complex lhs_raw;  // plain truncation sum_{n<=N} m_n P_n
  Complex rhs;
  double gap = 0.0;  // |lhs - rhs| / max(|lhs|, |rhs|), 0 when both vanish
};

/// Throws std::invalid_argument when the support boxes are not separated.
DualityResult duality_check(const Symbol& sym, const ParityVector& eps, const Function& f, const Box& f_support,
                            const Function& g, const Box& g_support, const MultiplicityIndex& alpha, int cutoff,
                            const DualityOptions& opt = {});

/// Off-diagonal sample pairs: y = x + r u for each center x, unit directions u keeping y in the
/// open positive cone, and r log-spaced on [margin, max_distance].
struct SweepGrid {
  std::vector<Point> centers;
  double margin = 1e-2;
  double max_distance = 3.0;
  int per_decade = 12;  // the ratios peak at |x-y| ~ 1 with widths of a fraction of a decade
  int directions = 8;  // angular resolution in d = 2; d = 1 always uses +-1

  /// 10x smaller margin, twice the radial density
  SweepGrid refined() const;
  std::vector<std::pair<Point, Point>> pairs() const;
  static SweepGrid standard(std::size_t d);
};

enum class EstimateKind { growth, gradient };
std::string to_string(EstimateKind k);

struct SweepPoint {
  Point x;
  Point y;
  double distance = 0.0;
  double ratio = 0.0;
};

struct SweepLevel {
  SweepGrid grid;
  std::vector<SweepPoint> points;
  double constant = 0.0;  // max ratio
};

struct KernelEstimateReport {
  EstimateKind kind = EstimateKind::growth;
  std::string symbol;
  MultiplicityIndex alpha;
  ParityVector eps;
  SweepLevel base;
  SweepLevel refined;
  double empirical_constant = 0.0;  // max over both levels
  double stability_factor = 1.0;    // max(C2/C1, C1/C2); 1 when both vanish

  bool stable() const;
};

/// Growth ratio |K| w(B(x,|x-y|)); gradient ratio |grad_{x,y} K| |x-y| w(B(x,|x-y|)).
KernelEstimateReport estimate_sweep(EstimateKind kind, const Symbol& sym, const ParityVector& eps,
                                    const MultiplicityIndex& alpha, const SweepGrid& grid, int workers = 1,
                                    const KernelOptions& opt = {});

enum class Lemma { mod, lem4, lem1, oq };
std::string to_string(Lemma l);
Lemma lemma_from_string(const std::string& name);

struct LemmaParams {
  double a = 2.0;  // mod
  MultiplicityIndex alpha = MultiplicityIndex({0.0});
  std::vector<double> delta{0.0};  // lem4
  std::vector<double> kappa{0.0};  // lem4
  bool gradient_form = false;      // lem4: the second inequality
  ParityVector eps = ParityVector({0});  // lem1
  ParityVector xi = ParityVector({0});
  ParityVector rho = ParityVector({0});
  double u = 1.0;
  double C = 0.5;
  double b = 0.0;  // oq
  double c = 1.0;
  std::optional<SweepGrid> grid;  // lem4/lem1 sample pairs; default SweepGrid::standard, 4 per decade
  std::optional<std::pair<Point, Point>> single_pair;  // lem4/lem1: evaluate one pair only

  /// throws std::invalid_argument naming the violated hypothesis
  void validate(Lemma l) const;
};

struct LemmaRow {
  std::vector<double> inputs;  // mod: T; oq: A, q; lem4/lem1: x..., y...
  double ratio = 0.0;
};

struct LemmaReport {
  Lemma lemma = Lemma::mod;
  std::vector<LemmaRow> base;
  std::vector<LemmaRow> refined;
  double constant = 0.0;          // max ratio on the base level (the fixed C')
  double refined_constant = 0.0;
  double stability_factor = 1.0;  // max(C2/C1, C1/C2)

  bool passed() const;
};

LemmaReport verify_lemma(Lemma lemma, const LemmaParams& params, int workers = 1);

/// I(T) = int_0^1 (1 - z^2)^{-1/2} z^{-a} e^{-T/z} dz.
double lemma_mod_integral(double a, double T, double rel_tol = 1e-11);

}  // namespace dunkl

#endif  // DUNKL_CZ_KERNELS_HPP
