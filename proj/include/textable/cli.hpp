#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace textable {

/// Exit codes: 0 success, 1 domain error, 2 usage error.
/// `args` excludes the program name.
int run_command(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace textable
