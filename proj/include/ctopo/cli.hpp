#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ctopo::cli {

enum ExitCode : int { kOk = 0, kPrecondition = 2, kOutOfFuel = 3 };

/// Runs one command line (without the program name). JSON lines go to out,
/// diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ctopo::cli
