#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smf::cli {

/// Runs one `smf` invocation. args excludes the program name.
/// Returns 0 on success, 1 on invalid input or failure (a JSON error object
/// goes to err), 2 for a missing or unknown subcommand (usage goes to err).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smf::cli
