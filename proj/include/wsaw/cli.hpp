#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wsaw::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,      // bad flags, unknown command, invalid domain spec or parameters
  kFails = 2,      // a verifier returned Fails
  kIoError = 3,    // output file could not be written, or an unexpected failure
};

/// Runs one command line (args excludes the program name). The report goes to
/// --output or to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wsaw::cli
