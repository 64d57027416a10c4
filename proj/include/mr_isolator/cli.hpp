#pragma once

#include <string>
#include <vector>

namespace mr_isolator {

/// Entry point of the `mr_isolator` tool. args[0] is the program name.
/// Returns 0 on success, 1 for usage or configuration errors and 2 when a
/// simulation diverges or tuning fails. Diagnostics go to standard error.
int CliMain(const std::vector<std::string>& args);

}  // namespace mr_isolator
