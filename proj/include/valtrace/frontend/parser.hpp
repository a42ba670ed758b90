#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "valtrace/frontend/ast.hpp"
#include "valtrace/frontend/token.hpp"

namespace valtrace {

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceSpan span, std::string expected, std::string found);

  const SourceSpan& span() const noexcept { return span_; }
  const std::string& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  SourceSpan span_;
  std::string expected_;
  std::string found_;
};

/// Builds a Module AST from the output of tokenize().
Program parse(std::span<const Token> tokens);

/// tokenize + parse. Throws LexError or ParseError.
Program parse_source(std::string_view source);

}  // namespace valtrace
