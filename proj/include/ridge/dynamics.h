#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ridge/direction.h"
#include "ridge/trajectory.h"
#include "ridge/vi_problem.h"

namespace ridge {

struct SolverConfig {
  double gamma = 1e-3;    // Euler step
  double epsilon = 1e-3;  // exit tolerance, also the zero test for S updates
  double alpha = 1e-3;    // termination gap
  bool ridge_correction = true;
  double correction_tol = 1e-10;
  std::int64_t max_epochs = 10000;
  /// Zero selects min(1e7 / gamma, 1e8).
  std::int64_t max_steps_per_epoch = 0;
  std::int64_t record_every = 1;
  double boundary_tol = 1e-12;
  DirectionOptions direction;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
  std::int64_t step_budget() const;
  Tolerances exit_tolerances() const { return {epsilon, boundary_tol}; }
};

enum class ExitKind { kGood, kBad, kMiddling };

const char* to_string(ExitKind k);

struct ExitEvent {
  ExitKind kind;
  /// Triggering coordinate (0-based). For kGood this is i.
  int coordinate;
  /// kGood only: whether i is zero-satisfied (within epsilon) at the point.
  bool zero_satisfied = false;
  Vector point;  // unit box
  std::vector<std::string> warnings;

  std::string tag() const;
};

/// z + gamma * D(z), followed by the ridge correction when enabled. The
/// result is not projected.
Vector euler_step(const VIProblem& p, const Vector& z, const EpochState& e,
                  const SolverConfig& cfg);

/// Damped Newton pull-back onto {V_S = 0}, moving only coordinates in
/// S and i, along the row space of the restricted Jacobian. At most five
/// iterations and never more than gamma of total motion.
/// Throws RidgeError(kCorrectionDiverged) when the residual grows.
Vector ridge_correction(const VIProblem& p, const Vector& z, const EpochState& e,
                        const SolverConfig& cfg);

struct ExitCheckOptions {
  /// -1 integrates backward in time (direction negated).
  double orientation = 1.0;
  /// When false the good condition is ignored (it must first be seen false).
  bool good_armed = true;
};

/// Whether coordinate i is almost satisfied at x.
bool good_condition(const Vector& v, const Vector& x, int i, const SolverConfig& cfg);

/// Good, then bad, then middling. Ties within a kind pick the smallest
/// coordinate and record a warning.
std::optional<ExitEvent> detect_exit(const VIProblem& p, const Vector& x, const EpochState& e,
                                     const SolverConfig& cfg, const ExitCheckOptions& opts = {});

/// Throws RidgeError(kAssumptionViolation) when a bad exit in coordinate 1
/// would leave the box.
EpochState epoch_transition(const EpochState& e, const ExitEvent& ev);

/// Discrete ridge-following from the lower corner, epoch (1, {}).
Trajectory run_stonr(const VIProblem& p, const SolverConfig& cfg = {});

/// Integrates z <- z - gamma * D(z) from `start` until an exit condition for
/// the reversed direction fires. The last record carries the event tag;
/// status is kSolved when an exit fired.
Trajectory run_backward(const VIProblem& p, const Vector& start, const EpochState& e,
                        const SolverConfig& cfg = {});

}  // namespace ridge
