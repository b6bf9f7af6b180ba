#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cssr {

// Runs the `cssr` command-line tool. `args` excludes the program name.
// Returns the process exit code: 0 success, 1 usage/parameter errors,
// 2 malformed or truncated data, 3 solver non-convergence in strict mode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cssr
