#pragma once

#include <string>
#include <vector>

#include "ridge/trajectory.h"

namespace ridge {

struct PlotSeries {
  std::string label;
  const Trajectory* trajectory = nullptr;
};

/// Standalone SVG of trajectory polylines over the problem-unit box, with a
/// dot at each start and a ring at each end. Only two-dimensional
/// trajectories are drawn; anything else throws std::invalid_argument.
std::string render_svg(const std::vector<PlotSeries>& series, const std::string& title = "");

void write_svg(const std::vector<PlotSeries>& series, const std::string& path,
               const std::string& title = "");

}  // namespace ridge
