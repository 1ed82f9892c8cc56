#pragma once

#include <string>
#include <vector>

#include "ridge/trajectory.h"

namespace ridge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitBudget = 2;
inline constexpr int kExitAssumption = 3;

int exit_code_for(TerminalStatus s);

/// Sets the log level from RIDGE_SOLVER_LOG (trace, debug, info, warn,
/// error, critical, off). Logs go to stderr; the default level is warn.
void configure_logging();

/// Runs `ridge_solver <subcommand> ...`; args excludes the program name.
int dispatch(const std::vector<std::string>& args);
int dispatch(int argc, const char* const* argv);

}  // namespace ridge
