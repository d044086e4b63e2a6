#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ssn::cli {

/// Runs one command line (without the program name). Normal output goes to
/// `out`, the effective configuration and diagnostics to `err`. Returns the
/// process exit status: 0 on success, nonzero otherwise.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "1,2,3", "1-25" or a mix such as "1-3,7".
std::vector<std::uint64_t> parse_seeds(std::string_view text);

}  // namespace ssn::cli
