#pragma once

#include <string>
#include <vector>

namespace esslab::cli {

// Parses and runs one command line (without the program name).
// Exit codes: 0 success, 2 configuration error, 3 runtime failure.
int run(std::vector<std::string> args);

}  // namespace esslab::cli
