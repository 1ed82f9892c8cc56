#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ridge/baselines.h"
#include "ridge/dynamics.h"
#include "ridge/objectives.h"
#include "ridge/vi_problem.h"

namespace ridge {

/// Raised for schema violations; the message names the offending field or
/// the line and column of a syntax error.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// V(u) = A u + b in problem units on the box [lower, upper].
struct AffineSpec {
  std::string name = "affine";
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::vector<double>> a;
  std::vector<double> b;
};

struct PerturbationConfig {
  std::string kind;  // sinusoidal_bias | linear_map | boundary_shrink
  double magnitude = 0.0;
};

struct RunConfig {
  static constexpr int kSchema = 1;

  std::string problem = "bilinear";
  std::optional<AffineSpec> affine;  // replaces the builtin when present
  std::optional<PerturbationConfig> perturbation;
  std::string method = "stonr";  // stonr | gda | eg | ogda | ftr

  double gamma = 1e-3;
  double epsilon = 1e-3;
  double alpha = 1e-3;
  double eta = 1e-2;
  double lambda = 1e-6;
  /// Baseline iteration budget, or the STON'R per-epoch step budget (0 picks
  /// the default).
  std::optional<std::int64_t> steps;
  std::int64_t max_epochs = 10000;
  std::int64_t record_every = 1;
  bool ridge_correction = true;

  /// Problem-unit starting points for baselines; STON'R ignores them.
  std::vector<std::vector<double>> inits;
  std::string out = ".";
  std::uint64_t seed = 0;

  /// Throws ConfigError.
  void validate() const;

  SolverConfig solver_config() const;
  BaselineMethod baseline_method() const;
  VIProblem make_problem() const;
  /// inits[0], or the box center when none is given.
  std::vector<Vector> init_points(const BoxDomain& domain) const;
};

const std::vector<std::string>& method_names();

/// Parses and validates JSON text against schema 1. Unknown fields are
/// rejected.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);
std::string dump_run_config(const RunConfig& cfg);

}  // namespace ridge
