#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wheelrotor {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInvalidInputFile = 2,  // config or scenario failed to parse or validate
  kExitSimulationAborted = 3, // fall, divergence or refused transition; log still written
  kExitIo = 4,
  kExitInvalidArgument = 5,   // numeric argument out of range
  kExitCheckFailed = 6,       // mixcheck error above threshold
};

inline constexpr double kMixcheckTolerance = 1e-9;

/// Runs the command line. `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wheelrotor
