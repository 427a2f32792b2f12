#pragma once

#include <string>
#include <vector>

namespace monge2::harness {

/// Parses the command line and runs one campaign. Returns 0 when every assertion
/// passed, 1 on a failed assertion or solver failure, 2 on a usage or input error.
int run(int argc, const char* const* argv);

/// Same, with the arguments after the program name.
int run(const std::vector<std::string>& args);

} // namespace monge2::harness
