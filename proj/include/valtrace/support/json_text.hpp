#pragma once

#include <string>
#include <string_view>

namespace valtrace::json_text {

/// Appends `s` as a JSON string literal. Control characters use \u escapes;
/// other bytes pass through unchanged.
void append_string(std::string& out, std::string_view s);

/// Shortest decimal text that round-trips to the same double. Non-finite
/// values are not valid JSON and must be handled by the caller.
std::string number(double d);

}  // namespace valtrace::json_text
