#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ridge/direction.h"
#include "ridge/dynamics.h"
#include "ridge/trajectory.h"
#include "ridge/vi_problem.h"

namespace ridge {

enum class CheckStatus { kPass, kFail, kNotApplicable };

const char* to_string(CheckStatus s);

/// A point in the unit box together with the epoch it is examined under.
struct AssumptionSample {
  Vector x;
  CoordinateSet s;
  int i = 0;
};

struct AssumptionTolerances {
  double sigma_tol = 1e-8;      // singular values at or below count as zero
  double zero_tol = 1e-6;       // |V_j| for j in S
  double boundary_tol = 1e-12;  // face membership
  double direction_tol = 1e-8;  // |d_j| at or below counts as zero
};

struct AssumptionWitness {
  std::string assumption;  // "A1-square", "A1-restricted", "A2", "A3"
  AssumptionSample sample;
  double value = 0.0;  // offending sigma, boundary count, or |d_j|
  std::string detail;
};

struct AssumptionReport {
  CheckStatus a1_square = CheckStatus::kNotApplicable;
  CheckStatus a1_restricted = CheckStatus::kNotApplicable;
  CheckStatus a2 = CheckStatus::kNotApplicable;
  CheckStatus a3 = CheckStatus::kNotApplicable;
  std::vector<AssumptionWitness> witnesses;

  int samples = 0;
  int a1_checked = 0;
  int a2_checked = 0;
  int a3_checked = 0;
  // Over the restricted matrices of the A1 samples.
  std::optional<double> sigma_min;
  std::optional<double> sigma_max;

  bool all_pass_or_na() const;
};

/// A1 looks at samples with V_S = 0, A2 and A3 at samples that additionally
/// have every coordinate outside S and i on a face. Never throws.
AssumptionReport check_assumptions(const VIProblem& p, const std::vector<AssumptionSample>& samples,
                                   const AssumptionTolerances& tol = {});

/// Epoch-start and exit rows of a recorded run, mapped to the unit box.
std::vector<AssumptionSample> samples_from_trajectory(const Trajectory& traj);

struct PivotCheck {
  Vector x;
  /// Minimum unsatisfied coordinate (0-based); none when x solves the VI.
  std::optional<int> ell;
  CoordinateSet m;
  bool is_pivot = false;
  /// 1-based bullet that failed first; 0 when is_pivot.
  int failing_bullet = 0;
  /// Every failing bullet, ascending.
  std::vector<int> failing_bullets;
};

PivotCheck detect_pivot(const VIProblem& p, const Vector& x, const Tolerances& tol = {});

struct ParityCheck {
  std::string id;  // "a" .. "e"
  std::string name;
  bool passed = true;
  int checked = 0;
  std::vector<std::string> witnesses;
};

struct ParityReport {
  std::vector<ParityCheck> checks;

  bool all_passed() const;
  const ParityCheck& check(const std::string& id) const;
};

/// Nodes are the epoch-start rows plus the last row. The zero test uses
/// cfg.epsilon. Backward consistency and admissible-pair agreement skip
/// epochs that took no step.
ParityReport parity_diagnostics(const VIProblem& p, const Trajectory& traj,
                                const SolverConfig& cfg = {});

}  // namespace ridge
