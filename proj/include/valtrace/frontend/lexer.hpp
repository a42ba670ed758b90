#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "valtrace/frontend/token.hpp"

namespace valtrace {

class LexError : public std::runtime_error {
 public:
  LexError(SourceSpan span, const std::string& message);

  const SourceSpan& span() const noexcept { return span_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  SourceSpan span_;
  std::string detail_;
};

/// Splits SL source into tokens. Indentation becomes Indent/Dedent tokens,
/// comments and blank lines are dropped, and newlines inside brackets are
/// ignored. The result always ends with an Eof token.
///
/// Indentation must use a single character class per file (spaces only or
/// tabs only); dedenting to a column that was never opened is an error.
std::vector<Token> tokenize(std::string_view source);

}  // namespace valtrace
