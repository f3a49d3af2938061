#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace commcap::cli {

// Runs one CLI invocation: args excludes the program name.
// Exit codes: 0 success, 1 computation error, 2 flag/usage error.
// Results go to `out` (JSON, or CSV for `sweep`), diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace commcap::cli
