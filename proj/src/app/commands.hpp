#pragma once

#include <string>

#include "app/config.hpp"

namespace flevy::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitCriterionFail = 1,
  kExitUsage = 2,
  kExitInfiniteVariation = 3,
};

struct CommandResult {
  int exit_code = kExitOk;
  std::string report;  // human-readable, for stdout or stderr
};

// simulate | check | tv | bounds | verify. Library errors become kExitUsage
// with the message as the report.
CommandResult run_command(const std::string& name, const RunConfig& c);

bool is_command(const std::string& name);

}  // namespace flevy::app
