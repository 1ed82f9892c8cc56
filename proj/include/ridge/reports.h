#pragma once

#include <string>

#include "ridge/trajectory.h"
#include "ridge/verify.h"
#include "ridge/vi_problem.h"

namespace ridge {

/// JSON documents, pretty-printed with two-space indentation.
std::string run_summary_json(const VIProblem& p, const std::string& method, const Trajectory& traj);
std::string assumption_report_json(const AssumptionReport& rep);
std::string parity_report_json(const ParityReport& rep);
std::string check_report_json(const VIProblem& p, const AssumptionReport& a, const ParityReport& r,
                              bool passed);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace ridge
