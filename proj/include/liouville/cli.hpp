#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace liouville::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNonexistence = 2;

// Runs one command line (without the program name). Exit 0 on success,
// 2 on a nonexistence verdict, 1 on any error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace liouville::cli
