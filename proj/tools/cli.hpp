#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace arps::cli {

enum ExitCode : int { kOk = 0, kNumerical = 1, kUsage = 2, kDomain = 3, kIo = 4 };

/// Runs one arps-sde invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace arps::cli
