#pragma once

#include <string>
#include <string_view>

#include "valtrace/frontend/source_span.hpp"

namespace valtrace {

enum class TokenKind {
  Keyword,
  Identifier,
  IntLiteral,
  FloatLiteral,
  StringLiteral,
  Operator,
  Newline,
  Indent,
  Dedent,
  Eof,
};

std::string_view to_string(TokenKind kind);

/// A lexical token. For string literals `lexeme` holds the decoded contents
/// (escapes resolved, quotes removed).
struct Token {
  TokenKind kind = TokenKind::Eof;
  std::string lexeme;
  SourceSpan span;

  bool is(TokenKind k, std::string_view text) const {
    return kind == k && lexeme == text;
  }
  bool is_op(std::string_view op) const { return is(TokenKind::Operator, op); }
  bool is_keyword(std::string_view kw) const {
    return is(TokenKind::Keyword, kw);
  }
};

/// Human-readable rendering used in diagnostics, e.g. `identifier 'x'`.
std::string describe(const Token& token);

bool is_keyword(std::string_view word);

}  // namespace valtrace
