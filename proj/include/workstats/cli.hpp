#pragma once

#include <iosfwd>

namespace workstats {

/// Exit codes of the workstats command.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,
  kExitNumerical = 3,
};

/// Entry point of `workstats distribution | sweep | selfcheck`. Tables go to
/// `out` (or --out FILE), diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace workstats
