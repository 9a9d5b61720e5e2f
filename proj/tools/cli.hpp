#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scref {

enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitError = 2 };

/// Runs the `scref` command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scref
