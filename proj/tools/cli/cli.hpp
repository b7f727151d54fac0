#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phidim::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,    ///< a verification or oracle check failed
  kConfigError = 2,    ///< command line or config file could not be parsed
  kInvalidSpec = 3,    ///< the distribution spec breaks an invariant
  kMissingInputs = 4,  ///< report inputs are absent
  kRuntimeError = 5,   ///< any other library error (infeasible window, ...)
};

/// Runs one invocation; `args` excludes the program name. Data goes to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phidim::cli
