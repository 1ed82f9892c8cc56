#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ridge/box_domain.h"

namespace ridge {

enum class Role { kMinimizing, kMaximizing };

/// A scalar objective f(theta, omega) in problem units together with its
/// derivatives and the role each coordinate plays.
struct MinMaxObjective {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  /// May be empty when no second-order consumer is planned.
  std::function<Matrix(const Vector&)> hessian;
  std::vector<Role> roles;

  int dimension() const { return static_cast<int>(roles.size()); }
};

using FieldFn = std::function<Vector(const Vector&)>;
using JacobianFn = std::function<Matrix(const Vector&)>;

/// Optional problem metadata. Used for reporting only.
struct ProblemConstants {
  std::optional<double> lipschitz;   // bound on ||V(x) - V(y)|| / ||x - y||
  std::optional<double> smoothness;  // bound on ||J(x) - J(y)||_F / ||x - y||
};

/// Variational inequality VI(V, [0,1]^n). The field and its Jacobian are
/// evaluated in unit-box coordinates; `domain()` records the affine map back
/// to problem units. Immutable and safe to share across threads.
class VIProblem {
 public:
  VIProblem(std::string name, BoxDomain domain, FieldFn field, JacobianFn jacobian,
            ProblemConstants constants = {},
            std::shared_ptr<const MinMaxObjective> objective = nullptr);

  const std::string& name() const { return name_; }
  int dimension() const { return domain_.dimension(); }
  const BoxDomain& domain() const { return domain_; }
  const ProblemConstants& constants() const { return constants_; }

  /// The min-max objective this problem was reduced from, if any.
  const MinMaxObjective* objective() const { return objective_.get(); }
  std::shared_ptr<const MinMaxObjective> shared_objective() const { return objective_; }

  Vector evaluate_v(const Vector& x) const;
  /// Entry (j, k) is dV_j / dx_k.
  Matrix evaluate_jacobian(const Vector& x) const;

  /// The same field expressed in problem units: V_j(u) / scale_j.
  Vector evaluate_v_problem(const Vector& u) const;

  const FieldFn& field() const { return field_; }
  const JacobianFn& jacobian() const { return jacobian_; }

 private:
  std::string name_;
  BoxDomain domain_;
  FieldFn field_;
  JacobianFn jacobian_;
  ProblemConstants constants_;
  std::shared_ptr<const MinMaxObjective> objective_;
};

/// V_j = -df/dx_j on minimizing coordinates, +df/dx_j on maximizing ones,
/// rescaled by the chain rule onto the unit box.
VIProblem min_max_to_vi(std::string name, std::shared_ptr<const MinMaxObjective> objective,
                        const BoxDomain& domain, ProblemConstants constants = {});

struct Tolerances {
  double zero_tol = 1e-9;
  double boundary_tol = 1e-12;
};

enum class Satisfaction { kZeroSatisfied, kBoundarySatisfied, kUnsatisfied };

const char* to_string(Satisfaction s);

struct CoordinateStatus {
  Satisfaction kind;
  double value;  // V_j(x)
  // Set when the coordinate also sits on a face; a zero-satisfied coordinate
  // on a face is reported as kZeroSatisfied with this flag raised.
  bool on_boundary = false;

  bool satisfied() const { return kind != Satisfaction::kUnsatisfied; }
};

bool at_lower(double xj, const Tolerances& tol);
bool at_upper(double xj, const Tolerances& tol);

CoordinateStatus classify_value(double xj, double vj, const Tolerances& tol);
CoordinateStatus classify_coordinate(const VIProblem& p, const Vector& x, int j,
                                     const Tolerances& tol = {});
std::vector<CoordinateStatus> classify_all(const VIProblem& p, const Vector& x,
                                           const Tolerances& tol = {});

/// max over y in the unit box of V(x)^T (y - x); zero exactly at solutions.
double vi_gap(const Vector& v, const Vector& x);
double vi_gap(const VIProblem& p, const Vector& x);
bool is_approx_solution(const VIProblem& p, const Vector& x, double alpha);

/// Central differences per column; one-sided within h of a face.
Matrix finite_diff_jacobian(const VIProblem& p, const Vector& x, double h);

/// Sampled lower estimate of the Lipschitz constant of V on the unit box.
double estimate_lipschitz(const VIProblem& p, int samples, unsigned seed);

}  // namespace ridge
