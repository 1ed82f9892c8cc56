#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ridge/box_domain.h"

namespace ridge {

enum class TerminalStatus { kSolved, kMaxEpochs, kMaxSteps, kAssumptionViolation };

const char* to_string(TerminalStatus s);
TerminalStatus terminal_status_from_string(const std::string& s);

/// Event tags carried by trajectory rows.
namespace event_tag {
inline constexpr const char* kStart = "start";
inline constexpr const char* kFinal = "final";
inline constexpr const char* kGoodZero = "good:zero";
inline constexpr const char* kGoodBoundary = "good:boundary";
// Bad and middling tags are "bad:<j>" / "middling:<j>" with 1-based j.
}  // namespace event_tag

/// One recorded row. `i` is 0-based in memory (-1 when not applicable) and
/// written 1-based; `s_mask` has bit j set for 0-based coordinate j.
struct TrajectoryRecord {
  std::int64_t step = 0;
  std::int64_t epoch = 0;
  int i = -1;
  std::uint64_t s_mask = 0;
  std::string event;
  Vector x;  // problem units
  Vector v;  // field in problem units

  bool operator==(const TrajectoryRecord& o) const {
    return step == o.step && epoch == o.epoch && i == o.i && s_mask == o.s_mask &&
           event == o.event && x == o.x && v == o.v;
  }
};

struct Trajectory {
  BoxDomain domain = BoxDomain::unit(1);
  std::vector<TrajectoryRecord> records;
  TerminalStatus status = TerminalStatus::kSolved;
  std::string message;  // diagnostic for non-solved runs; not serialized

  int dimension() const { return domain.dimension(); }

  bool operator==(const Trajectory& o) const {
    return domain == o.domain && records == o.records && status == o.status;
  }
};

}  // namespace ridge
