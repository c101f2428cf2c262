#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace matchsim::cli {

/// Market-size grid: "a:b:ladder" (default ladder clipped to [a, b], endpoints
/// included), "a:b:step" (arithmetic), or a comma list "5,10,20".
std::vector<std::size_t> parse_size_grid(std::string_view text);
std::vector<double> parse_real_list(std::string_view text);

/// `key = value` lines; '#' starts a comment. Throws on malformed lines.
std::map<std::string, std::string> parse_config(std::string_view text);

/// Entry point behind the `matchsim` executable. Returns the process exit status:
/// 0 on success, 1 on runtime failure, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace matchsim::cli
