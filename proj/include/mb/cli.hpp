#pragma once

#include <string>
#include <vector>

namespace mb::cli {

/// Runs the command line tool; returns the process exit code.
int run(const std::vector<std::string>& args);

}  // namespace mb::cli
