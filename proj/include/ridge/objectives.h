#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ridge/vi_problem.h"

namespace ridge {

/// 0 below 0, 3t^2 - 2t^3 on [0, 1], 1 above 1.
double smooth_step(double t);
double smooth_step_derivative(double t);
double smooth_step_second_derivative(double t);

struct BuiltinProblem {
  std::string name;
  std::shared_ptr<const MinMaxObjective> objective;
  BoxDomain domain;
  ProblemConstants constants;

  VIProblem to_vi() const;
};

/// Registry names: "f1", "f2", "bilinear", "neg_square". Coordinate 1 is the
/// minimizing player, coordinate 2 the maximizing one.
BuiltinProblem builtin(const std::string& name);
VIProblem builtin_vi(const std::string& name);
std::vector<std::string> builtin_names();

enum class PerturbationKind { kSinusoidalBias, kLinearMap, kBoundaryShrink };

PerturbationKind perturbation_kind_from_string(const std::string& s);

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::kLinearMap;
  double magnitude = 0.0;
  std::uint64_t seed = 0;
};

/// Seeded regularizing perturbations of a VI:
///  - SinusoidalBias adds magnitude * cos(x_j + psi_j) to V_j;
///  - LinearMap adds A x with A_jk uniform in [-magnitude, magnitude];
///  - BoundaryShrink restricts coordinate j to [a_j, 1 - b_j] with a_j, b_j
///    uniform in [0, magnitude] and renormalizes to the unit box.
VIProblem perturb(const VIProblem& p, const PerturbationSpec& spec);

}  // namespace ridge
