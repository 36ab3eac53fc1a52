#pragma once

#include <ostream>

namespace twinloop::cli {

/// Entry point of the `twinloop` tool. Returns the process exit code:
/// 0 success, 1 failure reported by a subcommand, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twinloop::cli
