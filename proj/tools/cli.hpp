#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rally::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kDomain = 3, kIo = 4 };

/// Runs one command line (without the program name). Tables go to `out`
/// unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rally::cli
