#pragma once

#include <iosfwd>
#include <string>

#include "ridge/trajectory.h"

namespace ridge {

/// CSV with header `step,epoch,i,S,event,x1..xn,V1..Vn`. `i` is written
/// 1-based (0 for rows without an epoch), S as a decimal bitmask and reals
/// with 17 significant digits. A final comment line carries the terminal
/// status and the box so that reading restores the trajectory exactly.
void write_trajectory(const Trajectory& traj, std::ostream& out);
void write_trajectory(const Trajectory& traj, const std::string& path);

/// Throws std::runtime_error naming the line on malformed input.
Trajectory read_trajectory(std::istream& in);
Trajectory read_trajectory(const std::string& path);

}  // namespace ridge
