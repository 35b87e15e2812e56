#pragma once

#include <string>
#include <vector>

namespace fiscale::cli {

// Runs one command line. Exit codes: 0 success, 2 validation error,
// 3 numerical failure (including verify mismatch), 4 information infinite
// where finiteness was required.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace fiscale::cli
