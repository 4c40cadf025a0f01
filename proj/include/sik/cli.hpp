#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sik::cli {

/// Process exit codes.
enum Exit : int { ok = 0, failed = 1, bad_input = 2 };

/// Runs one subcommand; args exclude the program name. Never throws.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace sik::cli
