#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gmf {

// Command-line entry point; returns the process exit code.
// 0: all trusted checks pass; 1: a check failed; 2: usage or parse error.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gmf
