#pragma once

#include <stdexcept>
#include <string>

namespace ridge {

enum class ErrorKind {
  kRankDeficient,
  kDegenerateOrientation,
  kMultipleBoundaryConflicts,
  kAllFrozen,
  kCorrectionDiverged,
  kSingularCorrection,
  kAssumptionViolation,
};

const char* to_string(ErrorKind kind);

// Numerical failure raised by the solver layers. Precondition violations
// (bad dimensions, non-positive steps, unknown names) use std::invalid_argument.
class RidgeError : public std::runtime_error {
 public:
  RidgeError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ridge
