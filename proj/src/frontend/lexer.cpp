#include "valtrace/frontend/lexer.hpp"

#include <array>
#include <charconv>
#include <vector>

namespace valtrace {

std::string to_string(const SourceSpan& span) {
  return std::to_string(span.line) + ":" + std::to_string(span.column);
}

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::IntLiteral: return "integer";
    case TokenKind::FloatLiteral: return "float";
    case TokenKind::StringLiteral: return "string";
    case TokenKind::Operator: return "operator";
    case TokenKind::Newline: return "newline";
    case TokenKind::Indent: return "indent";
    case TokenKind::Dedent: return "dedent";
    case TokenKind::Eof: return "end of input";
  }
  return "token";
}

std::string describe(const Token& token) {
  switch (token.kind) {
    case TokenKind::Newline:
    case TokenKind::Indent:
    case TokenKind::Dedent:
    case TokenKind::Eof:
      return std::string(to_string(token.kind));
    case TokenKind::StringLiteral:
      return "string literal";
    default:
      return std::string(to_string(token.kind)) + " '" + token.lexeme + "'";
  }
}

namespace {

constexpr std::array<std::string_view, 17> kKeywords = {
    "def",   "if",    "elif",  "else",     "while", "for",
    "in",    "return", "break", "continue", "pass",  "and",
    "or",    "not",   "true",  "false",    "none"};

// Longest first so that maximal munch works by linear scan.
constexpr std::array<std::string_view, 25> kOperators = {
    "//=", "**", "//", "==", "!=", "<=", ">=", "+=", "-=", "*=",
    "+",   "-",  "*",  "/",  "%",  "<",  ">",  "=",  "(",  ")",
    "[",   "]",  ",",  ":",  "."};

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    while (pos_ < src_.size()) {
      if (at_line_start_ && depth_ == 0) {
        if (!handle_line_start()) continue;
      }
      scan_token();
    }
    if (line_has_content_) {
      push(TokenKind::Newline, "", span_here(0));
    }
    while (indents_.size() > 1) {
      indents_.pop_back();
      push(TokenKind::Dedent, "", span_here(0));
    }
    push(TokenKind::Eof, "", span_here(0));
    return std::move(tokens_);
  }

 private:
  SourceSpan span_here(int length) const {
    return SourceSpan{line_, static_cast<int>(pos_ - line_start_) + 1, length};
  }

  void push(TokenKind kind, std::string lexeme, SourceSpan span) {
    tokens_.push_back(Token{kind, std::move(lexeme), span});
  }

  [[noreturn]] void fail(SourceSpan span, const std::string& msg) const {
    throw LexError(span, msg);
  }

  void newline() {
    ++pos_;
    ++line_;
    line_start_ = pos_;
    at_line_start_ = depth_ == 0;
  }

  // Measures indentation of the line at pos_. Returns false when the line is
  // blank or comment-only (it has been consumed).
  bool handle_line_start() {
    std::size_t p = pos_;
    int width = 0;
    bool saw_space = false;
    bool saw_tab = false;
    while (p < src_.size() && (src_[p] == ' ' || src_[p] == '\t')) {
      (src_[p] == ' ' ? saw_space : saw_tab) = true;
      ++width;
      ++p;
    }
    if (p >= src_.size() || src_[p] == '\n' || src_[p] == '#' ||
        (src_[p] == '\r' && p + 1 < src_.size() && src_[p + 1] == '\n')) {
      // Blank or comment-only line.
      while (p < src_.size() && src_[p] != '\n') ++p;
      pos_ = p;
      if (pos_ < src_.size()) newline();
      return false;
    }
    SourceSpan indent_span{line_, 1, width};
    if (saw_space || saw_tab) {
      const char used = saw_space ? ' ' : '\t';
      if (saw_space && saw_tab) {
        fail(indent_span, "mixed tabs and spaces in indentation");
      }
      if (indent_char_ == 0) {
        indent_char_ = used;
      } else if (indent_char_ != used) {
        fail(indent_span,
             "inconsistent indentation: file mixes tab- and space-indented "
             "lines");
      }
    }
    pos_ = p;
    at_line_start_ = false;
    line_has_content_ = true;
    if (width > indents_.back()) {
      indents_.push_back(width);
      push(TokenKind::Indent, std::string(src_.substr(line_start_, width)),
           indent_span);
    } else {
      while (width < indents_.back()) {
        indents_.pop_back();
        push(TokenKind::Dedent, "", span_here(0));
      }
      if (width != indents_.back()) {
        fail(indent_span, "unindent does not match any outer indentation level");
      }
    }
    return true;
  }

  void scan_token() {
    const char c = src_[pos_];
    if (c == '\n') {
      if (depth_ == 0) {
        if (line_has_content_) push(TokenKind::Newline, "\n", span_here(1));
        line_has_content_ = false;
      }
      newline();
      return;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++pos_;
      return;
    }
    if (c == '#') {
      while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      return;
    }
    if (is_ident_start(c)) {
      scan_word();
    } else if (is_digit(c)) {
      scan_number();
    } else if (c == '"') {
      scan_string();
    } else {
      scan_operator();
    }
  }

  void scan_word() {
    const std::size_t start = pos_;
    const SourceSpan begin = span_here(0);
    while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
    std::string word(src_.substr(start, pos_ - start));
    SourceSpan span = begin;
    span.length = static_cast<int>(word.size());
    const TokenKind kind =
        is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier;
    push(kind, std::move(word), span);
  }

  void scan_number() {
    const std::size_t start = pos_;
    SourceSpan span = span_here(0);
    bool is_float = false;
    while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    if (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
        is_digit(src_[pos_ + 1])) {
      is_float = true;
      ++pos_;
      while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && is_digit(src_[p])) {
        is_float = true;
        pos_ = p;
        while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
      }
    }
    if (pos_ < src_.size() && is_ident_start(src_[pos_])) {
      span.length = static_cast<int>(pos_ - start + 1);
      fail(span, "invalid numeric literal");
    }
    std::string text(src_.substr(start, pos_ - start));
    span.length = static_cast<int>(text.size());
    if (is_float) {
      double value = 0;
      auto [ptr, ec] =
          std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc{}) fail(span, "float literal out of range");
      push(TokenKind::FloatLiteral, std::move(text), span);
    } else {
      std::int64_t value = 0;
      auto [ptr, ec] =
          std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc{}) {
        fail(span, "integer literal does not fit in 64 bits");
      }
      push(TokenKind::IntLiteral, std::move(text), span);
    }
  }

  void scan_string() {
    SourceSpan span = span_here(0);
    const std::size_t start = pos_;
    ++pos_;
    std::string value;
    while (true) {
      if (pos_ >= src_.size() || src_[pos_] == '\n') {
        span.length = static_cast<int>(pos_ - start);
        fail(span, "unterminated string literal");
      }
      const char c = src_[pos_];
      if (c == '"') {
        ++pos_;
        break;
      }
      if (c == '\\') {
        if (pos_ + 1 >= src_.size()) {
          span.length = static_cast<int>(pos_ - start);
          fail(span, "unterminated string literal");
        }
        const char e = src_[pos_ + 1];
        switch (e) {
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          case '\\': value += '\\'; break;
          case '"': value += '"'; break;
          default:
            fail(span_here(2), std::string("unknown escape sequence '\\") +
                                   e + "'");
        }
        pos_ += 2;
        continue;
      }
      value += c;
      ++pos_;
    }
    span.length = static_cast<int>(pos_ - start);
    push(TokenKind::StringLiteral, std::move(value), span);
  }

  void scan_operator() {
    const std::string_view rest = src_.substr(pos_);
    for (std::string_view op : kOperators) {
      if (rest.starts_with(op)) {
        SourceSpan span = span_here(static_cast<int>(op.size()));
        if (op == "(" || op == "[") ++depth_;
        if ((op == ")" || op == "]") && depth_ > 0) --depth_;
        pos_ += op.size();
        push(TokenKind::Operator, std::string(op), span);
        return;
      }
    }
    const auto byte = static_cast<unsigned char>(src_[pos_]);
    std::string shown = byte < 0x20 || byte >= 0x7f
                            ? "byte 0x" + to_hex(byte)
                            : std::string(1, src_[pos_]);
    fail(span_here(1), "illegal character " + shown);
  }

  static std::string to_hex(unsigned char b) {
    constexpr char digits[] = "0123456789abcdef";
    return {digits[b >> 4], digits[b & 0xf]};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_start_ = 0;
  int line_ = 1;
  int depth_ = 0;
  bool at_line_start_ = true;
  bool line_has_content_ = false;
  char indent_char_ = 0;
  std::vector<int> indents_{0};
  std::vector<Token> tokens_;
};

}  // namespace

bool is_keyword(std::string_view word) {
  for (auto kw : kKeywords) {
    if (kw == word) return true;
  }
  return false;
}

LexError::LexError(SourceSpan span, const std::string& message)
    : std::runtime_error(to_string(span) + ": " + message),
      span_(span),
      detail_(message) {}

std::vector<Token> tokenize(std::string_view source) {
  return Lexer(source).run();
}

}  // namespace valtrace
