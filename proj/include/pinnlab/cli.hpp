#pragma once

#include <string>
#include <vector>

namespace pinnlab {

/// Entry point behind the pinnlab binary; exposed so tests can drive
/// commands in-process. Returns the process exit code.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

} // namespace pinnlab
