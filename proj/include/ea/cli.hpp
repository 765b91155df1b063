#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ea::tools {

/// Command-line front end. Subcommands: expand, query, explain, validate,
/// stats, serve. Exit codes: 0 success, 1 data error, 2 configuration error,
/// 64 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

} // namespace ea::tools
