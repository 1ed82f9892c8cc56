#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ridge/trajectory.h"
#include "ridge/vi_problem.h"

namespace ridge {

enum class BaselineKind { kGDA, kEG, kOGDA, kFTR };

const char* to_string(BaselineKind k);
BaselineKind baseline_kind_from_string(const std::string& s);

struct BaselineMethod {
  BaselineKind kind = BaselineKind::kGDA;
  double eta = 1e-2;
  double damping = 1e-6;  // FtR only
  std::int64_t steps = 100000;
  /// Stop once the unit-box gap drops to this level; negative disables.
  double alpha = 1e-3;
  std::int64_t record_every = 1;

  void validate() const;
};

/// Iterates live in problem units. `v_prev` is the field at the previous
/// iterate and is only read by OGDA.
struct BaselineState {
  Vector u;
  std::optional<Vector> v_prev;
};

/// One projected update. Throws RidgeError(kSingularCorrection) for FtR with
/// a singular max-block Hessian and zero damping, and std::invalid_argument
/// when FtR is asked for a problem without an objective Hessian.
BaselineState baseline_step(const VIProblem& p, const BaselineState& s, const BaselineMethod& m);

/// Errors from baseline_step propagate. Records use i = -1 and epoch 0; the first row is tagged "start" and the
/// last "final".
Trajectory run_baseline(const VIProblem& p, const BaselineMethod& m, const Vector& init);

}  // namespace ridge
