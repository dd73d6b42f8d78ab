#pragma once

// Experiment driver behind the `multirec` executable.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage or capacity error.

#include <iosfwd>
#include <string>
#include <vector>

namespace multirec {

/// `args` excludes the program name.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace multirec
