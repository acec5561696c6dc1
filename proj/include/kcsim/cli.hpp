#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kcsim::cli {

// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kMalformed = 2,
  kNotFound = 3,
  kUndefined = 4,
  kProviderFailure = 5,
};

// Runs the command line (without the program name) writing normal output to
// `out` and diagnostics to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kcsim::cli
