#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace marcum::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kViolations = 1,    ///< verify found violations
  kDomainError = 2,   ///< arguments outside the function's domain
  kNoInflection = 3,  ///< no inflection point exists (or is refused)
  kUsageError = 64
};

/// Runs the tool with argv-style arguments (args[0] is the program name).
/// Normal output goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace marcum::cli
