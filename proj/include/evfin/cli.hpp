#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace evfin {

enum ExitCode : int {
    exit_ok = 0,
    exit_validation = 1,
    exit_infeasible = 2,
    exit_io = 3,
};

// argv excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace evfin
