#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace zebra::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitEmpty = 3;

// Parses and executes one invocation. Never throws; failures map to the
// exit codes above with a message on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zebra::cli
