#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace klein {

// Entry point of the klein-systolic tool; `args` excludes the program name.
// Returns 0 on success, 1 on a numeric or verification failure, 2 on a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace klein
