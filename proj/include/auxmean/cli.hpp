#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace auxmean {

/// Runs one command-line invocation (args exclude the program name) and
/// writes results to `out` and diagnostics to `err`. Returns the process
/// exit code: 0 on success, 1 on infeasible-spec errors (e.g. exhausted
/// adversary budget) or failed verification, 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace auxmean
