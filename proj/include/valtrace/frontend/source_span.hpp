#pragma once

#include <string>

namespace valtrace {

/// Location of a token or node in the original source. Line and column are
/// 1-based byte positions.
struct SourceSpan {
  int line = 1;
  int column = 1;
  int length = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// Formats as "line:column".
std::string to_string(const SourceSpan& span);

}  // namespace valtrace
