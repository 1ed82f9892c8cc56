#include "ridge/vi_problem.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ridge/errors.h"

namespace ridge {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kRankDeficient: return "RankDeficient";
    case ErrorKind::kDegenerateOrientation: return "DegenerateOrientation";
    case ErrorKind::kMultipleBoundaryConflicts: return "MultipleBoundaryConflicts";
    case ErrorKind::kAllFrozen: return "AllFrozen";
    case ErrorKind::kCorrectionDiverged: return "CorrectionDiverged";
    case ErrorKind::kSingularCorrection: return "SingularCorrection";
    case ErrorKind::kAssumptionViolation: return "AssumptionViolation";
  }
  return "Unknown";
}

const char* to_string(Satisfaction s) {
  switch (s) {
    case Satisfaction::kZeroSatisfied: return "ZeroSatisfied";
    case Satisfaction::kBoundarySatisfied: return "BoundarySatisfied";
    case Satisfaction::kUnsatisfied: return "Unsatisfied";
  }
  return "Unknown";
}

VIProblem::VIProblem(std::string name, BoxDomain domain, FieldFn field, JacobianFn jacobian,
                     ProblemConstants constants,
                     std::shared_ptr<const MinMaxObjective> objective)
    : name_(std::move(name)),
      domain_(std::move(domain)),
      field_(std::move(field)),
      jacobian_(std::move(jacobian)),
      constants_(constants),
      objective_(std::move(objective)) {
  if (!field_ || !jacobian_) {
    throw std::invalid_argument("VIProblem: field and jacobian must be callable");
  }
}

Vector VIProblem::evaluate_v(const Vector& x) const { return field_(x); }

Matrix VIProblem::evaluate_jacobian(const Vector& x) const { return jacobian_(x); }

Vector VIProblem::evaluate_v_problem(const Vector& u) const {
  return (field_(domain_.to_unit(u)).array() / domain_.scale().array()).matrix();
}

VIProblem min_max_to_vi(std::string name, std::shared_ptr<const MinMaxObjective> objective,
                        const BoxDomain& domain, ProblemConstants constants) {
  if (!objective || !objective->gradient) {
    throw std::invalid_argument("min_max_to_vi: objective must provide a gradient");
  }
  if (objective->dimension() != domain.dimension()) {
    throw std::invalid_argument("min_max_to_vi: objective has " +
                                std::to_string(objective->dimension()) +
                                " coordinates but the domain has " +
                                std::to_string(domain.dimension()));
  }
  const int n = domain.dimension();
  Vector sign(n);
  for (int j = 0; j < n; ++j) {
    sign[j] = objective->roles[j] == Role::kMinimizing ? -1.0 : 1.0;
  }
  // d/dx_j = scale_j * d/du_j.
  const Vector row_factor = (sign.array() * domain.scale().array()).matrix();

  FieldFn field = [objective, domain, row_factor](const Vector& x) -> Vector {
    return (row_factor.array() * objective->gradient(domain.from_unit(x)).array()).matrix();
  };
  JacobianFn jacobian;
  if (objective->hessian) {
    jacobian = [objective, domain, row_factor](const Vector& x) -> Matrix {
      Matrix h = objective->hessian(domain.from_unit(x));
      return row_factor.asDiagonal() * h * domain.scale().asDiagonal();
    };
  } else {
    jacobian = [](const Vector&) -> Matrix {
      throw std::logic_error("min_max_to_vi: objective has no Hessian; Jacobian unavailable");
    };
  }
  return VIProblem(std::move(name), domain, std::move(field), std::move(jacobian), constants,
                   std::move(objective));
}

bool at_lower(double xj, const Tolerances& tol) { return xj <= tol.boundary_tol; }
bool at_upper(double xj, const Tolerances& tol) { return xj >= 1.0 - tol.boundary_tol; }

CoordinateStatus classify_value(double xj, double vj, const Tolerances& tol) {
  const bool lower = at_lower(xj, tol);
  const bool upper = at_upper(xj, tol);
  if (std::abs(vj) <= tol.zero_tol) {
    return {Satisfaction::kZeroSatisfied, vj, lower || upper};
  }
  if ((lower && vj <= tol.zero_tol) || (upper && vj >= -tol.zero_tol)) {
    return {Satisfaction::kBoundarySatisfied, vj, true};
  }
  return {Satisfaction::kUnsatisfied, vj, lower || upper};
}

CoordinateStatus classify_coordinate(const VIProblem& p, const Vector& x, int j,
                                     const Tolerances& tol) {
  const Vector v = p.evaluate_v(x);
  return classify_value(x[j], v[j], tol);
}

std::vector<CoordinateStatus> classify_all(const VIProblem& p, const Vector& x,
                                           const Tolerances& tol) {
  const Vector v = p.evaluate_v(x);
  std::vector<CoordinateStatus> out;
  out.reserve(v.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) out.push_back(classify_value(x[j], v[j], tol));
  return out;
}

double vi_gap(const Vector& v, const Vector& x) {
  double gap = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (v[j] > 0.0) {
      gap += v[j] * (1.0 - x[j]);
    } else if (v[j] < 0.0) {
      gap += -v[j] * x[j];
    }
  }
  return gap;
}

double vi_gap(const VIProblem& p, const Vector& x) { return vi_gap(p.evaluate_v(x), x); }

bool is_approx_solution(const VIProblem& p, const Vector& x, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("is_approx_solution: alpha must be >= 0");
  return vi_gap(p, x) <= alpha;
}

Matrix finite_diff_jacobian(const VIProblem& p, const Vector& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_jacobian: step must be positive");
  const int n = p.dimension();
  Matrix jac(n, n);
  for (int k = 0; k < n; ++k) {
    const double back = x[k] - h >= 0.0 ? h : 0.0;
    const double ahead = x[k] + h <= 1.0 ? h : 0.0;
    if (back + ahead == 0.0) {
      throw std::invalid_argument("finite_diff_jacobian: step exceeds the box width");
    }
    Vector plus = x;
    Vector minus = x;
    plus[k] += ahead;
    minus[k] -= back;
    jac.col(k) = (p.evaluate_v(plus) - p.evaluate_v(minus)) / (back + ahead);
  }
  return jac;
}

double estimate_lipschitz(const VIProblem& p, int samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n = p.dimension();
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vector x(n);
    for (int j = 0; j < n; ++j) x[j] = unif(rng);
    // Spectral norm of the Jacobian bounds the local ratio.
    Eigen::JacobiSVD<Matrix> svd(p.evaluate_jacobian(x));
    best = std::max(best, svd.singularValues()[0]);
  }
  return best;
}

}  // namespace ridge
