#pragma once

#include <string>
#include <vector>

namespace hl {

// Entry point of the hlab tool. Exit codes: 0 ok, 1 domain/config/usage
// error, 2 numerical failure, 3 red flag.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace hl
