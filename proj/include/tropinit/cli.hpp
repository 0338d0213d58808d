#pragma once

#include <string>
#include <vector>

namespace tropinit {

/// Parse and run one subcommand (trop / compile / train / eval / render /
/// experiment). args excludes the program name. Returns the process exit
/// status: 0 success, 1 validation error, 2 numerical failure. Errors print
/// one stable stderr line `ERROR <code>: <detail>`.
int run_cli(const std::vector<std::string>& args);

int run_cli(int argc, char** argv);

}  // namespace tropinit
