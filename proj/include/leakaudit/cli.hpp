#pragma once

#include <string>
#include <vector>

namespace leakaudit::cli {

// Entry point behind the binary; exposed so tests can drive commands
// in-process. argv follows main() conventions (argv[0] is the program
// name). Returns the process exit code: 0 success, 1 usage error,
// 2 data error.
int run(int argc, const char* const* argv);

// Convenience overload: args without the program name.
int run(const std::vector<std::string>& args);

}  // namespace leakaudit::cli
