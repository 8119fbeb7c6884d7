#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ainf::cli {

enum ExitCode : int { kSuccess = 0, kMathFailure = 1, kUsage = 2 };

/// Runs the command line (without the program name); everything goes to
/// `out` and `err`, nothing to the process streams.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ainf::cli
