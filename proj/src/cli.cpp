#include "dunkl/cli.hpp"

#include "dunkl/basis.hpp"
#include "dunkl/cz_kernels.hpp"
#include "dunkl/heat_kernel.hpp"
#include "dunkl/multipliers.hpp"
#include "dunkl/parallel.hpp"
#include "dunkl/quadrature.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

namespace dunkl::cli {

namespace {

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"basis-check", "heat-check",     "multiplier-apply", "duality",
                                              "estimate-sweep", "lemma",      "boundedness",      "poisson-check"};
  return names;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::vector<double> parse_doubles(const std::string& s, const std::string& what) {
  std::vector<double> out;
  if (s.empty()) return out;
  for (const std::string& part : split(s, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) throw std::invalid_argument(what + ": cannot parse '" + part + "'");
    out.push_back(v);
  }
  return out;
}

ParityVector parse_parity(const std::string& s, std::size_t d, const std::string& what) {
  if (s.empty()) return ParityVector::zero(d);
  std::vector<int> e;
  for (const std::string& part : split(s, ',')) {
    if (part != "0" && part != "1") throw std::invalid_argument(what + ": entries must be 0 or 1, got '" + part + "'");
    e.push_back(part == "1");
  }
  if (e.size() != d) {
    throw std::invalid_argument(what + " has " + std::to_string(e.size()) + " components, dim is " + std::to_string(d));
  }
  return ParityVector(e);
}

std::vector<double> broadcast(const std::vector<double>& v, std::size_t d) {
  if (v.empty()) return std::vector<double>(d, 0.0);
  if (v.size() == 1) return std::vector<double>(d, v[0]);
  return v;
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }
std::string parity_label(const ParityVector& e) {
  std::string s;
  for (int v : e.components()) s += static_cast<char>('0' + v);
  return s;
}

// CSV writer with a fixed header; numbers in shortest round-trip form
class Csv {
public:
  explicit Csv(const std::vector<std::string>& header) { row_strings(header); }
  Csv& cell(const std::string& s) {
    line_.push_back(s);
    return *this;
  }
  Csv& cell(double v) { return cell(format_number(v)); }
  Csv& cells(std::span<const double> v) {
    for (double x : v) cell(x);
    return *this;
  }
  void end() {
    row_strings(line_);
    line_.clear();
  }
  std::string str() const { return text_; }

private:
  void row_strings(const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) text_ += (i ? "," : "") + r[i];
    text_ += "\n";
  }
  std::vector<std::string> line_;
  std::string text_;
};

std::vector<std::string> coord_names(const std::string& base, std::size_t d) {
  std::vector<std::string> n;
  for (std::size_t j = 1; j <= d; ++j) n.push_back(base + std::to_string(j));
  return n;
}

std::vector<std::string> concat(std::vector<std::vector<std::string>> parts) {
  std::vector<std::string> all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

// every point of coords^d, first axis slowest
std::vector<Point> tensor_points(const std::vector<double>& coords, std::size_t d) {
  std::vector<Point> pts{Point{}};
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<Point> next;
    for (const Point& p : pts) {
      for (double c : coords) {
        Point q = p;
        q.push_back(c);
        next.push_back(q);
      }
    }
    pts = std::move(next);
  }
  return pts;
}

double bump(double u) { return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0; }

// product bump on the box [lo, hi]
Function box_bump(const Point& lo, const Point& hi) {
  return [=](std::span<const double> x) {
    double v = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j) v *= bump((x[j] - 0.5 * (lo[j] + hi[j])) / (0.5 * (hi[j] - lo[j])));
    return Complex(v);
  };
}

Report finish(const ExperimentConfig& cfg, Json results, std::string csv, bool passed) {
  Report r;
  r.json["schema_version"] = kSchemaVersion;
  r.json["command"] = cfg.command;
  r.json["config"] = cfg.to_json();
  r.json["results"] = std::move(results);
  r.json["passed"] = passed;
  r.csv = std::move(csv);
  r.passed = passed;
  return r;
}

double tol_or(const ExperimentConfig& cfg, double fallback) { return cfg.tol > 0.0 ? cfg.tol : fallback; }
int cutoff_or(const ExperimentConfig& cfg, int fallback) { return cfg.cutoff > 0 ? cfg.cutoff : fallback; }

// ---------------------------------------------------------------- basis-check

Report basis_check(const ExperimentConfig& cfg) {
  const std::size_t d = cfg.dim;
  const MultiplicityIndex alpha = cfg.multiplicity();
  const int N = cutoff_or(cfg, 12);
  const double tol = tol_or(cfg, 1e-8);
  const double eig_tol = 1e-4;

  const auto ks = enumerate_multi_indices(d, N);
  std::vector<double> row_worst(ks.size(), 0.0);
  parallel_for(ks.size(), cfg.workers, [&](std::size_t i) {
    double w = 0.0;
    for (std::size_t j = i; j < ks.size(); ++j) {
      w = std::max(w, std::abs(basis_inner_product(ks[i], ks[j], alpha, Domain::full) - (i == j ? 1.0 : 0.0)));
    }
    row_worst[i] = w;
  });
  const double orth = *std::max_element(row_worst.begin(), row_worst.end());

  // generic points drawn once, in a fixed order, away from the coordinate hyperplanes
  const auto eks = enumerate_multi_indices(d, std::min(N, 8));
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> ud(0.15, 2.8);
  std::bernoulli_distribution flip(0.5);
  std::vector<std::vector<Point>> points(eks.size());
  for (auto& set : points) {
    for (int p = 0; p < 20; ++p) {
      Point x(d);
      for (double& v : x) v = flip(gen) ? -ud(gen) : ud(gen);
      set.push_back(x);
    }
  }
  std::vector<double> eig(eks.size(), 0.0);
  parallel_for(eks.size(), cfg.workers, [&](std::size_t i) {
    const MultiIndex k = eks[i];
    const Function h = [&alpha, k](std::span<const double> x) { return Complex(hermite_nd(k, alpha, x)); };
    const double lam = eigenvalue(k.norm1(), alpha);
    double w = 0.0;
    for (const Point& x : points[i]) {
      const double hv = h(x).real();
      w = std::max(w, std::abs(oscillator_apply(h, alpha, x) - lam * hv) / std::abs(lam * hv));
    }
    eig[i] = w;
  });
  const double eig_worst = *std::max_element(eig.begin(), eig.end());

  Csv csv(concat({{"check"}, coord_names("k", d), {"value"}}));
  Json rows = Json::array();
  for (std::size_t i = 0; i < ks.size(); ++i) {
    csv.cell("orthonormality_row");
    for (int v : ks[i].components()) csv.cell(std::to_string(v));
    csv.cell(row_worst[i]).end();
  }
  for (std::size_t i = 0; i < eks.size(); ++i) {
    csv.cell("eigenfunction");
    for (int v : eks[i].components()) csv.cell(std::to_string(v));
    csv.cell(eig[i]).end();
    rows.push_back({{"k", eks[i].components()}, {"max_rel_error", eig[i]}});
  }
  Json res;
  res["orthonormality"] = {{"cutoff", N}, {"functions", ks.size()}, {"max_deviation", orth}, {"tol", tol},
                           {"passed", orth < tol}};
  res["eigenfunction"] = {{"cutoff", std::min(N, 8)}, {"points_per_function", 20}, {"max_rel_error", eig_worst},
                          {"tol", eig_tol}, {"passed", eig_worst < eig_tol}, {"per_function", rows}};
  return finish(cfg, res, csv.str(), orth < tol && eig_worst < eig_tol);
}

// ---------------------------------------------------------------- heat-check

Report heat_check(const ExperimentConfig& cfg) {
  const std::size_t d = cfg.dim;
  const MultiplicityIndex alpha = cfg.multiplicity();
  const double tol = tol_or(cfg, 1e-6);
  const std::vector<double> times{0.1, 0.3, 1.0};
  const std::vector<Point> pts = tensor_points({0.2, 0.9, 1.8, 3.0}, d);
  const auto parities = cfg.parities();

  struct Row {
    HeatKernelQuery q;
    double bessel = 0, series = 0, schlafli = 0;
  };
  std::vector<Row> rows;
  for (double t : times) {
    for (const auto& e : parities) {
      for (const Point& x : pts) {
        for (const Point& y : pts) rows.push_back({HeatKernelQuery{t, x, y, alpha, e}});
      }
    }
  }
  parallel_for(rows.size(), cfg.workers, [&](std::size_t i) {
    Row& r = rows[i];
    r.bessel = heat_component_bessel(r.q);
    r.series = heat_component_series_factored(r.q, heat_series_cutoff(r.q.t, 1, 1e-22));
    r.schlafli = heat_component_schlafli(r.q);
  });
  double worst_series = 0.0, worst_schlafli = 0.0;
  Csv csv(concat({{"t", "eps"}, coord_names("x", d), coord_names("y", d),
                  {"bessel", "series", "schlafli", "rel_series", "rel_schlafli"}}));
  for (const Row& r : rows) {
    const double es = std::abs(r.series - r.bessel) / r.bessel;
    const double eq = std::abs(r.schlafli - r.bessel) / r.bessel;
    worst_series = std::max(worst_series, es);
    worst_schlafli = std::max(worst_schlafli, eq);
    csv.cell(r.q.t).cell(parity_label(r.q.eps)).cells(r.q.x).cells(r.q.y);
    csv.cell(r.bessel).cell(r.series).cell(r.schlafli).cell(es).cell(eq).end();
  }
  const double max_rel = std::max(worst_series, worst_schlafli);
  bool passed = max_rel < tol;

  Json res;
  res["max_rel_error"] = max_rel;
  res["three_way"] = {{"times", times},
                      {"coordinates", {0.2, 0.9, 1.8, 3.0}},
                      {"queries", rows.size()},
                      {"max_rel_error_series", worst_series},
                      {"max_rel_error_schlafli", worst_schlafli},
                      {"tol", tol},
                      {"passed", max_rel < tol}};

  // sum over eps of the components against the unrestricted series, at points off the cone
  Point x(d), y(d);
  for (std::size_t j = 0; j < d; ++j) {
    x[j] = (j % 2 == 0) ? -0.8 : 0.4 + 0.3 * static_cast<double>(j);
    y[j] = (j % 2 == 0) ? 1.1 : -0.6;
  }
  double decomp = 0.0;
  for (double t : {0.3, 1.0}) {
    decomp = std::max(decomp, std::abs(heat_full(t, x, y, alpha) -
                                       heat_full_series(t, x, y, alpha, heat_series_cutoff(t, d, 1e-15))));
  }
  res["decomposition"] = {{"x", x}, {"y", y}, {"max_abs_error", decomp}, {"tol", 1e-8}, {"passed", decomp < 1e-8}};
  passed = passed && decomp < 1e-8;

  const double sg = heat_semigroup_integral(0.3, 0.4, x, y, alpha, d == 1 ? 160 : 60);
  const double sg_ref = heat_full(0.7, x, y, alpha);
  const double sg_err = std::abs(sg - sg_ref) / std::abs(sg_ref);
  res["semigroup"] = {{"t", 0.3}, {"s", 0.4}, {"rel_error", sg_err}, {"tol", 1e-4}, {"passed", sg_err < 1e-4}};
  passed = passed && sg_err < 1e-4;

  if (d == 1 && alpha[0] == -0.5) {
    double worst = 0.0;
    for (double t : {0.1, 0.5, 1.0}) {
      for (double a : {0.3, 1.0, 2.0}) {
        for (double b : {0.3, 1.0, 2.0}) {
          const double s2 = std::sinh(2 * t);
          const double mehler = std::exp(-0.5 * (a * a + b * b) / std::tanh(2 * t) + a * b / s2) /
                                std::sqrt(2 * std::numbers::pi * s2);
          double sum = 0.0;
          for (const auto& e : ParityVector::all(1)) sum += heat_component_bessel({t, {a}, {b}, alpha, e});
          worst = std::max(worst, std::abs(sum - mehler) / mehler);
        }
      }
    }
    res["mehler"] = {{"max_rel_error", worst}, {"tol", 1e-8}, {"passed", worst < 1e-8}};
    passed = passed && worst < 1e-8;
  }
  return finish(cfg, res, csv.str(), passed);
}

// ---------------------------------------------------------------- multiplier-apply

Report multiplier_apply(const ExperimentConfig& cfg) {
  const std::size_t d = cfg.dim;
  const MultiplicityIndex alpha = cfg.multiplicity();
  const int N = cutoff_or(cfg, 12);
  const double tol = tol_or(cfg, 1e-10);
  const Symbol sym = make_symbol(cfg.symbol);
  const Function f = make_test_function(cfg.function, alpha);
  const double scale = std::pow(2.0, static_cast<double>(d));

  const double step = d == 1 ? 0.1 : (d == 2 ? 0.3 : 1.0);
  std::vector<double> axis;
  for (int i = 0; i * step <= 6.0 + 1e-12; ++i) axis.push_back(-3.0 + i * step);
  const std::vector<Point> pts = tensor_points(axis, d);

  const auto whole = apply_multiplier(sym, f, alpha, N);
  const auto eps_all = ParityVector::all(d);
  std::vector<SpectralCoefficients> parts(eps_all.size());
  parallel_for(eps_all.size(), cfg.workers, [&](std::size_t i) {
    parts[i] = apply_multiplier_component(sym, eps_all[i], epsilon_projection(f, eps_all[i]), alpha, N);
  });
  const int K = N / 2;
  const auto lag = apply_laguerre_multiplier(sym, f, alpha, K);
  const auto comp0 = apply_multiplier_component(sym, ParityVector::zero(d), f, alpha, 2 * K);

  std::vector<Complex> values(pts.size());
  std::vector<double> recon(pts.size(), 0.0), lag_err(pts.size(), 0.0);
  parallel_for(pts.size(), cfg.workers, [&](std::size_t i) {
    const Point& x = pts[i];
    values[i] = synthesize(whole, x);
    Complex sum = 0.0;
    for (const auto& part : parts) sum += scale * synthesize(part, x);
    recon[i] = std::abs(sum - values[i]);
    if (std::all_of(x.begin(), x.end(), [](double v) { return v > 0.0; })) {
      lag_err[i] = std::abs(synthesize(lag, x) - scale * synthesize(comp0, x));
    }
  });
  double vmax = 1.0;
  for (const Complex& v : values) vmax = std::max(vmax, std::abs(v));
  const double recon_err = *std::max_element(recon.begin(), recon.end()) / vmax;
  const double lag_worst = *std::max_element(lag_err.begin(), lag_err.end()) / vmax;

  const auto spec = symbol_on_spectrum(sym, alpha, N);
  bool unimodular = true;
  for (const Complex& m : spec.values) unimodular = unimodular && std::abs(std::abs(m) - 1.0) <= 1e-12;
  const bool contraction = spec.sup_abs() <= 1.0 + 1e-12;
  const double nf = coefficient_norm(expand(f, alpha, N, Domain::full));
  const double nm = coefficient_norm(whole);

  Json res;
  res["cutoff"] = N;
  res["function"] = cfg.function;
  res["symbol"] = {{"name", sym.name}, {"provenance", to_string(sym.provenance())}, {"sup_on_spectrum", spec.sup_abs()}};
  // errors are relative to max(1, max |m(L) f|) over the sample grid
  res["sample_scale"] = vmax;
  res["reconstruction"] = {{"max_abs_error", recon_err * vmax}, {"max_rel_error", recon_err}, {"tol", tol},
                           {"passed", recon_err <= tol}};
  res["laguerre_relation"] = {{"laguerre_cutoff", K}, {"max_abs_error", lag_worst * vmax},
                              {"max_rel_error", lag_worst}, {"tol", tol}, {"passed", lag_worst <= tol}};
  bool passed = recon_err <= tol && lag_worst <= tol;
  Json norm = {{"input_norm", nf}, {"output_norm", nm}};
  if (unimodular) {
    const double dev = std::abs(nm - nf);
    norm["property"] = "isometry";
    norm["deviation"] = dev;
    norm["passed"] = dev <= tol;
    passed = passed && dev <= tol;
  } else if (contraction) {
    norm["property"] = "contraction";
    norm["excess"] = std::max(0.0, nm - nf);
    norm["passed"] = nm <= nf + tol;
    passed = passed && nm <= nf + tol;
  } else {
    norm["property"] = "none";
  }
  res["l2_norm"] = norm;

  Csv csv(concat({coord_names("x", d), {"re", "im"}}));
  Json samples = Json::array();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    csv.cells(pts[i]).cell(values[i].real()).cell(values[i].imag()).end();
    samples.push_back({{"x", pts[i]}, {"value", complex_json(values[i])}});
  }
  res["samples"] = samples;
  return finish(cfg, res, csv.str(), passed);
}

// ---------------------------------------------------------------- duality

Report duality(const ExperimentConfig& cfg) {
  const std::size_t d = cfg.dim;
  if (d > 2) throw std::invalid_argument("duality: dim must be 1 or 2");
  const MultiplicityIndex alpha = cfg.multiplicity();
  const int N = cutoff_or(cfg, d == 1 ? 40 : 20);
  const double tol = tol_or(cfg, 1e-3);
  const Symbol sym = make_symbol(cfg.symbol);
  Box bf, bg;
  if (d == 1) {
    bf = {{0.5}, {1.0}};
    bg = {{2.0}, {3.0}};
  } else {
    bf = {{0.5, 0.5}, {1.0, 1.5}};
    bg = {{2.0, 0.5}, {3.0, 1.5}};
  }
  const Function f = box_bump(bf.lo, bf.hi);
  const Function g = box_bump(bg.lo, bg.hi);
  DualityOptions opt;
  opt.workers = cfg.workers;

  Json rows = Json::array();
  Csv csv({"eps", "lhs_re", "lhs_im", "lhs_raw_re", "lhs_raw_im", "rhs_re", "rhs_im", "gap"});
  bool passed = true;
  double worst = 0.0;
  for (const auto& e : cfg.parities()) {
    const DualityResult r = duality_check(sym, e, f, bf, g, bg, alpha, N, opt);
    passed = passed && r.gap <= tol;
    worst = std::max(worst, r.gap);
    rows.push_back({{"eps", e.components()},
                    {"lhs", complex_json(r.lhs)},
                    {"lhs_raw", complex_json(r.lhs_raw)},
                    {"rhs", complex_json(r.rhs)},
                    {"gap", r.gap},
                    {"passed", r.gap <= tol}});
    csv.cell(parity_label(e)).cell(r.lhs.real()).cell(r.lhs.imag()).cell(r.lhs_raw.real()).cell(r.lhs_raw.imag());
    csv.cell(r.rhs.real()).cell(r.rhs.imag()).cell(r.gap).end();
  }
  Json res;
  res["cutoff"] = N;
  res["f_support"] = {{"lo", bf.lo}, {"hi", bf.hi}};
  res["g_support"] = {{"lo", bg.lo}, {"hi", bg.hi}};
  res["tol"] = tol;
  res["max_gap"] = worst;
  res["components"] = rows;
  return finish(cfg, res, csv.str(), passed);
}

// ---------------------------------------------------------------- estimate-sweep

SweepGrid configured_grid(const ExperimentConfig& cfg) {
  SweepGrid g = SweepGrid::standard(cfg.dim);
  g.margin = cfg.margin;
  g.max_distance = cfg.max_distance;
  if (cfg.per_decade > 0) g.per_decade = cfg.per_decade;
  else if (cfg.command == "lemma") g.per_decade = 4;
  return g;
}

Json grid_json(const SweepGrid& g) {
  Json c = Json::array();
  for (const Point& p : g.centers) c.push_back(p);
  return {{"centers", c},
          {"margin", g.margin},
          {"max_distance", g.max_distance},
          {"per_decade", g.per_decade},
          {"directions", g.directions}};
}

Report estimate_sweep_cmd(const ExperimentConfig& cfg) {
  const std::size_t d = cfg.dim;
  const MultiplicityIndex alpha = cfg.multiplicity();
  const double bound = tol_or(cfg, 2.0);
  const Symbol sym = make_symbol(cfg.symbol);
  const SweepGrid grid = configured_grid(cfg);
  std::vector<EstimateKind> kinds;
  if (cfg.kind != "gradient") kinds.push_back(EstimateKind::growth);
  if (cfg.kind != "growth") kinds.push_back(EstimateKind::gradient);

  Json records = Json::array();
  Csv csv(concat({{"kind", "eps", "level"}, coord_names("x", d), coord_names("y", d), {"distance", "ratio"}}));
  bool passed = true;
  for (EstimateKind kind : kinds) {
    for (const auto& e : cfg.parities()) {
      const auto rep = estimate_sweep(kind, sym, e, alpha, grid, cfg.workers);
      const bool ok = std::isfinite(rep.empirical_constant) && rep.stability_factor < bound;
      passed = passed && ok;
      auto ratios = [](const SweepLevel& lv) {
        std::vector<double> r;
        for (const auto& p : lv.points) r.push_back(p.ratio);
        return r;
      };
      records.push_back({{"kind", to_string(kind)},
                         {"eps", e.components()},
                         {"grid", grid_json(rep.base.grid)},
                         {"ratios", ratios(rep.base)},
                         {"constant", rep.base.constant},
                         {"refined_grid", grid_json(rep.refined.grid)},
                         {"refined_ratios", ratios(rep.refined)},
                         {"refined_constant", rep.refined.constant},
                         {"empirical_constant", rep.empirical_constant},
                         {"stability_factor", rep.stability_factor},
                         {"stable", ok}});
      for (const auto* lv : {&rep.base, &rep.refined}) {
        for (const auto& p : lv->points) {
          csv.cell(to_string(kind)).cell(parity_label(e)).cell(lv == &rep.base ? "base" : "refined");
          csv.cells(p.x).cells(p.y).cell(p.distance).cell(p.ratio).end();
        }
      }
    }
  }
  Json res;
  res["symbol"] = sym.name;
  res["stability_bound"] = bound;
  res["reports"] = records;
  return finish(cfg, res, csv.str(), passed);
}

// ---------------------------------------------------------------- lemma

Report lemma_cmd(const ExperimentConfig& cfg) {
  const std::size_t d = cfg.dim;
  const Lemma lemma = lemma_from_string(cfg.lemma);
  const double bound = tol_or(cfg, 2.0);
  LemmaParams p;
  p.a = cfg.a;
  p.alpha = cfg.multiplicity();
  p.delta = broadcast(cfg.delta, d);
  p.kappa = broadcast(cfg.kappa, d);
  p.gradient_form = cfg.gradient_form;
  p.eps = cfg.eps == "all" ? ParityVector::zero(d) : parse_parity(cfg.eps, d, "eps");
  p.xi = parse_parity(cfg.xi, d, "xi");
  p.rho = parse_parity(cfg.rho, d, "rho");
  p.u = cfg.u;
  p.C = cfg.C;
  p.b = cfg.b;
  p.c = cfg.c;
  p.grid = configured_grid(cfg);
  const LemmaReport rep = verify_lemma(lemma, p, cfg.workers);
  const bool ok = std::isfinite(rep.constant) && std::isfinite(rep.refined_constant) && rep.stability_factor < bound;

  std::vector<std::string> inputs;
  if (lemma == Lemma::mod) {
    inputs = {"T"};
  } else if (lemma == Lemma::oq) {
    inputs = {"A", "q"};
  } else {
    inputs = concat({coord_names("x", d), coord_names("y", d)});
  }
  Csv csv(concat({{"level"}, inputs, {"ratio"}}));
  auto rows_json = [&](const std::vector<LemmaRow>& rows, const char* level) {
    Json out = Json::array();
    for (const auto& r : rows) {
      out.push_back({{"inputs", r.inputs}, {"ratio", r.ratio}});
      csv.cell(level).cells(r.inputs).cell(r.ratio).end();
    }
    return out;
  };
  Json res;
  res["lemma"] = to_string(lemma);
  res["input_names"] = inputs;
  res["base"] = rows_json(rep.base, "base");
  res["refined"] = rows_json(rep.refined, "refined");
  res["constant"] = rep.constant;
  res["refined_constant"] = rep.refined_constant;
  res["stability_factor"] = rep.stability_factor;
  res["stability_bound"] = bound;
  return finish(cfg, res, csv.str(), ok);
}

// ---------------------------------------------------------------- boundedness

Report boundedness(const ExperimentConfig& cfg) {
  const std::size_t d = cfg.dim;
  if (d > 2) throw std::invalid_argument("boundedness: dim must be 1 or 2");
  const MultiplicityIndex alpha = cfg.multiplicity();
  const int N = cutoff_or(cfg, 40);
  const Symbol sym = make_symbol(cfg.symbol);
  const PowerWeight U(broadcast(cfg.weight, d));

  // tensor Gauss-Legendre rule on [0, R]^d for the L^p(U dw_alpha^+) norms
  const double R = 6.0;
  const quad::Rule axis = quad::gauss_legendre(d == 1 ? 160 : 40, 0.0, R);
  std::vector<Point> nodes = tensor_points(std::vector<double>(axis.nodes.begin(), axis.nodes.end()), d);
  std::vector<double> weights(nodes.size(), 1.0);
  {
    std::vector<Point> idx = tensor_points([&] {
      std::vector<double> ids;
      for (std::size_t i = 0; i < axis.size(); ++i) ids.push_back(static_cast<double>(i));
      return ids;
    }(), d);
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      for (std::size_t j = 0; j < d; ++j) {
        const double x = nodes[n][j];
        weights[n] *= axis.weights[static_cast<std::size_t>(idx[n][j])] * std::pow(x, 2 * alpha[j] + 1);
      }
      weights[n] *= U(nodes[n]);
    }
  }
  auto norm_p = [&](const std::vector<Complex>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += weights[i] * std::pow(std::abs(v[i]), cfg.p);
    return std::pow(s, 1.0 / cfg.p);
  };

  struct Probe {
    std::string label;
    Point lo, hi;
  };
  std::vector<Probe> family;
  for (double c : {0.3, 0.8, 1.5, 2.5}) {
    for (double h : {0.1, 0.4}) {
      if (c - h <= 0.0) continue;
      family.push_back({"bump:c=" + format_number(c) + ",h=" + format_number(h), Point(d, c - h), Point(d, c + h)});
    }
  }
  std::vector<int> cutoffs;
  for (int n : {N / 4, N / 2, N}) {
    if (n >= 1 && (cutoffs.empty() || cutoffs.back() != n)) cutoffs.push_back(n);
  }

  struct Cell {
    ParityVector eps;
    int cutoff = 0;
    std::size_t probe = 0;
    double ratio = 0.0;
  };
  std::vector<Cell> cells;
  for (const auto& e : cfg.parities()) {
    for (int n : cutoffs) {
      for (std::size_t k = 0; k < family.size(); ++k) cells.push_back({e, n, k});
    }
  }
  parallel_for(cells.size(), cfg.workers, [&](std::size_t i) {
    Cell& c = cells[i];
    const Probe& pr = family[c.probe];
    const Function f = box_bump(pr.lo, pr.hi);
    const auto q = box_expansion_quadrature(alpha, pr.lo, pr.hi, d == 1 ? 60 : 24);
    const auto out = apply_multiplier_component(sym, c.eps, f, alpha, c.cutoff, q);
    std::vector<Complex> fin(nodes.size()), fout(nodes.size());
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      fin[n] = f(nodes[n]);
      fout[n] = synthesize(out, nodes[n]);
    }
    c.ratio = norm_p(fout) / norm_p(fin);
  });

  Json table = Json::array();
  Csv csv({"eps", "cutoff", "p", "max_ratio", "worst_probe"});
  for (std::size_t i = 0; i < cells.size(); i += family.size()) {
    std::size_t best = i;
    for (std::size_t k = i; k < i + family.size(); ++k) {
      if (cells[k].ratio > cells[best].ratio) best = k;
    }
    const Cell& c = cells[best];
    table.push_back({{"eps", c.eps.components()},
                     {"cutoff", c.cutoff},
                     {"p", cfg.p},
                     {"max_ratio", c.ratio},
                     {"worst_probe", family[c.probe].label}});
    csv.cell(parity_label(c.eps)).cell(std::to_string(c.cutoff)).cell(cfg.p).cell(c.ratio);
    csv.cell("\"" + family[c.probe].label + "\"").end();
  }

  BallFamily balls;
  for (double c : {0.1, 0.5, 1.0, 2.0}) {
    for (double r : {0.05, 0.5, 2.0}) {
      balls.centers.push_back(Point(d, c));
      balls.radii.push_back(r);
    }
  }
  Json res;
  res["exploratory"] = true;
  res["symbol"] = sym.name;
  res["p"] = cfg.p;
  res["weight_exponents"] = U.exponents();
  res["ap_estimate"] = ap_constant_estimate(U, cfg.p, alpha, balls);
  res["norm_domain"] = {{"lo", 0.0}, {"hi", R}, {"nodes_per_axis", axis.size()}};
  res["table"] = table;
  return finish(cfg, res, csv.str(), true);
}

// ---------------------------------------------------------------- poisson-check

Report poisson_check(const ExperimentConfig& cfg) {
  const std::size_t d = cfg.dim;
  const MultiplicityIndex alpha = cfg.multiplicity();
  const int N = cutoff_or(cfg, d == 1 ? 4000 : 400);
  const double tol = tol_or(cfg, 1e-5);
  const std::vector<double> times = d == 1 ? std::vector<double>{0.3, 1.0, 2.0} : std::vector<double>{1.0, 2.0};
  const std::vector<Point> pts =
      tensor_points(d == 1 ? std::vector<double>{0.3, 0.8, 1.5, 2.5} : std::vector<double>{0.4, 1.2}, d);
  struct Row {
    double t;
    ParityVector eps;
    Point x, y;
    double sub = 0, series = 0;
  };
  std::vector<Row> rows;
  for (double t : times) {
    for (const auto& e : cfg.parities()) {
      for (const Point& x : pts) {
        for (const Point& y : pts) rows.push_back({t, e, x, y});
      }
    }
  }
  parallel_for(rows.size(), cfg.workers, [&](std::size_t i) {
    Row& r = rows[i];
    r.sub = poisson_component(r.t, r.x, r.y, alpha, r.eps);
    r.series = poisson_component_series(r.t, r.x, r.y, alpha, r.eps, N);
  });
  double worst = 0.0;
  Csv csv(concat({{"t", "eps"}, coord_names("x", d), coord_names("y", d), {"subordination", "series", "rel_error"}}));
  for (const Row& r : rows) {
    const double e = std::abs(r.sub - r.series) / std::abs(r.series);
    worst = std::max(worst, e);
    csv.cell(r.t).cell(parity_label(r.eps)).cells(r.x).cells(r.y).cell(r.sub).cell(r.series).cell(e).end();
  }
  Json res;
  res["cutoff"] = N;
  res["times"] = times;
  res["queries"] = rows.size();
  res["max_rel_error"] = worst;
  res["tol"] = tol;
  return finish(cfg, res, csv.str(), worst < tol);
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

Json ExperimentConfig::to_json() const {
  return {{"command", command},
          {"dim", dim},
          {"alpha", alpha},
          {"symbol", symbol},
          {"eps", eps},
          {"cutoff", cutoff},
          {"tol", tol},
          {"workers", workers},
          {"out", out},
          {"format", format},
          {"kind", kind},
          {"margin", margin},
          {"max_distance", max_distance},
          {"per_decade", per_decade},
          {"lemma", lemma},
          {"a", a},
          {"delta", delta},
          {"kappa", kappa},
          {"gradient_form", gradient_form},
          {"xi", xi},
          {"rho", rho},
          {"u", u},
          {"C", C},
          {"b", b},
          {"c", c},
          {"function", function},
          {"p", p},
          {"weight", weight}};
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  ExperimentConfig cfg;
  auto get = [&j](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("command", cfg.command);
  get("dim", cfg.dim);
  get("alpha", cfg.alpha);
  get("symbol", cfg.symbol);
  get("eps", cfg.eps);
  get("cutoff", cfg.cutoff);
  get("tol", cfg.tol);
  get("workers", cfg.workers);
  get("out", cfg.out);
  get("format", cfg.format);
  get("kind", cfg.kind);
  get("margin", cfg.margin);
  get("max_distance", cfg.max_distance);
  get("per_decade", cfg.per_decade);
  get("lemma", cfg.lemma);
  get("a", cfg.a);
  get("delta", cfg.delta);
  get("kappa", cfg.kappa);
  get("gradient_form", cfg.gradient_form);
  get("xi", cfg.xi);
  get("rho", cfg.rho);
  get("u", cfg.u);
  get("C", cfg.C);
  get("b", cfg.b);
  get("c", cfg.c);
  get("function", cfg.function);
  get("p", cfg.p);
  get("weight", cfg.weight);
  return cfg;
}

MultiplicityIndex ExperimentConfig::multiplicity() const { return MultiplicityIndex(broadcast(alpha, dim)); }

std::vector<ParityVector> ExperimentConfig::parities() const {
  if (eps == "all") return ParityVector::all(dim);
  return {parse_parity(eps, dim, "eps")};
}

void ExperimentConfig::validate() const {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), command) == names.end()) {
    throw std::invalid_argument("unknown command '" + command + "'");
  }
  if (dim < 1 || dim > 4) throw std::invalid_argument("dim must be between 1 and 4");
  if (alpha.size() != 1 && alpha.size() != dim) {
    throw std::invalid_argument("alpha has " + std::to_string(alpha.size()) + " components, dim is " +
                                std::to_string(dim));
  }
  for (double v : alpha) {
    if (!(v >= -0.5)) throw std::invalid_argument("alpha below -1/2");
  }
  if (eps != "all") parse_parity(eps, dim, "eps");
  if (cutoff < 0) throw std::invalid_argument("cutoff must be nonnegative");
  if (!(tol >= 0.0)) throw std::invalid_argument("tol must be nonnegative");
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");
  if (format != "json" && format != "csv" && format != "both") {
    throw std::invalid_argument("format must be json, csv or both");
  }
  if (kind != "growth" && kind != "gradient" && kind != "both") {
    throw std::invalid_argument("kind must be growth, gradient or both");
  }
  if (!(margin > 0.0) || !(max_distance > margin)) throw std::invalid_argument("need 0 < margin < max-distance");
  if (per_decade < 0) throw std::invalid_argument("per-decade must be nonnegative");
  if (!(p >= 1.0)) throw std::invalid_argument("p must be at least 1");
  if (!weight.empty() && weight.size() != 1 && weight.size() != dim) {
    throw std::invalid_argument("weight has " + std::to_string(weight.size()) + " components, dim is " +
                                std::to_string(dim));
  }
  for (const auto* v : {&delta, &kappa}) {
    if (!v->empty() && v->size() != 1 && v->size() != dim) {
      throw std::invalid_argument("delta/kappa must have 1 or dim components");
    }
  }
  try {
    make_symbol(symbol);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("symbol: ") + e.what());
  }
  make_test_function(function, multiplicity());
}

Function make_test_function(const std::string& name, const MultiplicityIndex& alpha) {
  const std::size_t d = alpha.dim();
  if (name == "gaussian") {
    return [](std::span<const double> x) {
      double r = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) r += (x[j] - 0.7) * (x[j] - 0.7);
      return Complex(std::exp(-r));
    };
  }
  if (name == "bump") return box_bump(Point(d, 0.5), Point(d, 1.5));
  const auto colon = name.find(':');
  const std::string head = name.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : name.substr(colon + 1);
  if (head == "random" && !arg.empty()) {
    // Gaussian envelope with a random center, linear phase and complex amplitude
    std::mt19937 gen(static_cast<unsigned>(parse_doubles(arg, "random seed").at(0)));
    std::normal_distribution<double> nd;
    std::vector<double> c(d), w(d);
    for (std::size_t j = 0; j < d; ++j) {
      c[j] = 0.7 * nd(gen);
      w[j] = nd(gen);
    }
    const Complex amp(nd(gen), nd(gen));
    return [=](std::span<const double> x) {
      double r = 0.0, lin = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        r += (x[j] - c[j]) * (x[j] - c[j]);
        lin += w[j] * x[j];
      }
      return amp * std::exp(Complex(-0.6 * r, 0.4 * lin));
    };
  }
  if (head == "hermite" && !arg.empty()) {
    std::vector<int> k;
    for (double v : parse_doubles(arg, "hermite index")) {
      if (v < 0 || v != std::floor(v)) throw std::invalid_argument("hermite index must be a nonnegative integer");
      k.push_back(static_cast<int>(v));
    }
    if (k.size() != d) throw std::invalid_argument("hermite index has the wrong dimension");
    const MultiIndex mk(k);
    return [mk, alpha](std::span<const double> x) { return Complex(hermite_nd(mk, alpha, x)); };
  }
  throw std::invalid_argument("unknown test function '" + name + "' (gaussian, bump, random:<seed>, hermite:<k>)");
}

Report run(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.command == "basis-check") return basis_check(cfg);
  if (cfg.command == "heat-check") return heat_check(cfg);
  if (cfg.command == "multiplier-apply") return multiplier_apply(cfg);
  if (cfg.command == "duality") return duality(cfg);
  if (cfg.command == "estimate-sweep") return estimate_sweep_cmd(cfg);
  if (cfg.command == "lemma") return lemma_cmd(cfg);
  if (cfg.command == "boundedness") return boundedness(cfg);
  return poisson_check(cfg);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verification suite for Dunkl-Hermite multipliers and their kernels", "dunkl"};
  app.set_config("--config", "", "INI/TOML file of option=value lines; command-line flags win");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1, 1);

  ExperimentConfig cfg;
  std::string alpha_s = "0", delta_s, kappa_s, weight_s;
  app.add_option("--dim", cfg.dim, "dimension d")->capture_default_str();
  app.add_option("--alpha", alpha_s, "multiplicity a1,...,ad (one value is broadcast)")->capture_default_str();
  app.add_option("--symbol", cfg.symbol, "registry name, e.g. heat:0.5, fractional:0.5, imaginary-power:1")
      ->capture_default_str();
  app.add_option("--eps", cfg.eps, "parity vector e1,...,ed or all")->capture_default_str();
  app.add_option("--cutoff", cfg.cutoff, "spectral truncation N (0: command default)")->capture_default_str();
  app.add_option("--tol", cfg.tol, "asserted tolerance (0: command default)")->capture_default_str();
  app.add_option("--workers", cfg.workers, "worker threads")->capture_default_str();
  app.add_option("--out", cfg.out, "report directory (default: stdout)");
  app.add_option("--format", cfg.format, "json, csv or both")->capture_default_str();
  app.add_option("--kind", cfg.kind, "estimate-sweep: growth, gradient or both")->capture_default_str();
  app.add_option("--margin", cfg.margin, "smallest |x-y| on sweep grids")->capture_default_str();
  app.add_option("--max-distance", cfg.max_distance, "largest |x-y| on sweep grids")->capture_default_str();
  app.add_option("--per-decade", cfg.per_decade, "radial samples per decade (0: 12 for sweeps, 4 for lemmas)")->capture_default_str();
  app.add_option("--a", cfg.a, "lemma mod: exponent a > 1")->capture_default_str();
  app.add_option("--delta", delta_s, "lemma lem4: delta (one value is broadcast)");
  app.add_option("--kappa", kappa_s, "lemma lem4: kappa (one value is broadcast)");
  app.add_flag("--gradient-form", cfg.gradient_form, "lemma lem4: second inequality");
  app.add_option("--xi", cfg.xi, "lemma lem1: parity vector xi <= eps");
  app.add_option("--rho", cfg.rho, "lemma lem1: parity vector rho <= eps");
  app.add_option("--u", cfg.u, "lemma lem1: u >= 1")->capture_default_str();
  app.add_option("--C", cfg.C, "lemma lem1: C > 0")->capture_default_str();
  app.add_option("--b", cfg.b, "lemma oq: b >= 0")->capture_default_str();
  app.add_option("--c", cfg.c, "lemma oq: c > 0")->capture_default_str();
  app.add_option("--function", cfg.function, "multiplier-apply: gaussian, bump, random:<seed>, hermite:<k>")
      ->capture_default_str();
  app.add_option("--p", cfg.p, "boundedness: exponent p >= 1")->capture_default_str();
  app.add_option("--weight", weight_s, "boundedness: power weight exponents");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"basis-check", "orthonormality and eigenfunction checks of the Hermite basis"},
      {"heat-check", "three-way heat kernel agreement, decomposition, semigroup"},
      {"multiplier-apply", "apply a symbol to a test function; reconstruction and norm checks"},
      {"duality", "spectral pairing against the kernel double integral"},
      {"estimate-sweep", "growth and gradient kernel estimates with refinement"},
      {"lemma", "auxiliary lemma verifiers"},
      {"boundedness", "exploratory L^p(U dw) operator-norm table"},
      {"poisson-check", "Poisson subordination against the spectral series"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    if (name == "lemma") sub->add_option("name", cfg.lemma, "mod, lem4, lem1 or oq")->capture_default_str();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  try {
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.alpha = parse_doubles(alpha_s, "alpha");
    if (cfg.alpha.empty()) throw std::invalid_argument("alpha: no components given");
    cfg.delta = parse_doubles(delta_s, "delta");
    cfg.kappa = parse_doubles(kappa_s, "kappa");
    cfg.weight = parse_doubles(weight_s, "weight");
    const Report rep = run(cfg);
    const std::string json = rep.json.dump(2) + "\n";
    const bool want_json = cfg.format != "csv";
    const bool want_csv = cfg.format != "json";
    if (cfg.out.empty()) {
      if (want_json) out << json;
      if (want_csv) out << rep.csv;
    } else {
      namespace fs = std::filesystem;
      fs::create_directories(cfg.out);
      auto write = [&](const std::string& ext, const std::string& text) {
        const fs::path path = fs::path(cfg.out) / (cfg.command + ext);
        std::ofstream os(path, std::ios::binary);
        os << text;
        if (!os) throw std::runtime_error("cannot write " + path.string());
        out << "wrote " << path.string() << "\n";
      };
      if (want_json) write(".json", json);
      if (want_csv) write(".csv", rep.csv);
      out << cfg.command << ": " << (rep.passed ? "PASS" : "FAIL") << "\n";
    }
    return rep.passed ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace dunkl::cli
