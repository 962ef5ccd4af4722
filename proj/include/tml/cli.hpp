#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tml {

// Entry point for the `tm` tool. `args` excludes the program name.
// Exit codes: 0 success (warnings allowed), 1 diagnostics with errors,
// 2 usage problems (bad flags, missing or unreadable files).
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace tml
