#ifndef DUNKL_CLI_HPP
#define DUNKL_CLI_HPP

#include "dunkl/core.hpp"

#include "json.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace dunkl::cli {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

/// Everything a subcommand run depends on. Zero cutoff/tol select the subcommand default.
struct ExperimentConfig {
  std::string command;
  std::size_t dim = 1;
  std::vector<double> alpha{0.0};  // one value is broadcast to every axis
  std::string symbol = "fractional:0.5";
  std::string eps = "all";  // "all" or "e1,...,ed"
  int cutoff = 0;
  double tol = 0.0;
  int workers = 1;
  std::string out;  // report directory; empty writes to stdout
  std::string format = "json";

  // sweeps (estimate-sweep, lem4, lem1)
  std::string kind = "both";  // growth | gradient | both
  double margin = 1e-2;
  double max_distance = 3.0;
  int per_decade = 0;  // 0: command default

  // lemma
  std::string lemma = "mod";
  double a = 2.0;
  std::vector<double> delta;  // empty means zeros
  std::vector<double> kappa;
  bool gradient_form = false;
  std::string xi;  // empty means zeros
  std::string rho;
  double u = 1.0;
  double C = 0.5;
  double b = 0.0;
  double c = 1.0;

  // multiplier-apply and boundedness
  std::string function = "gaussian";
  double p = 2.0;
  std::vector<double> weight;  // power weight exponents; empty means U = 1

  Json to_json() const;
  static ExperimentConfig from_json(const Json& j);

  /// alpha broadcast to dim components
  MultiplicityIndex multiplicity() const;
  /// the selected parity vectors in lexicographic order
  std::vector<ParityVector> parities() const;

  /// throws std::invalid_argument naming the violated precondition
  void validate() const;
};

struct Report {
  Json json;
  std::string csv;
  bool passed = true;
};

/// Test functions by name: gaussian, bump, random:<seed>, hermite:<k1,...>.
Function make_test_function(const std::string& name, const MultiplicityIndex& alpha);

/// Runs one subcommand: basis-check, heat-check, multiplier-apply, duality, estimate-sweep,
/// lemma, boundedness, poisson-check. Throws std::invalid_argument on invalid configs.
Report run(const ExperimentConfig& cfg);

/// Full command line front end; args excludes the program name. Returns the exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest round-trip decimal form used in CSV output.
std::string format_number(double v);

}  // namespace dunkl::cli

#endif  // DUNKL_CLI_HPP
