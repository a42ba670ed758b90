#include "valtrace/frontend/parser.hpp"

#include <charconv>
#include <utility>

#include "valtrace/frontend/lexer.hpp"

namespace valtrace {

ParseError::ParseError(SourceSpan span, std::string expected, std::string found)
    : std::runtime_error(to_string(span) + ": expected " + expected +
                         ", found " + found),
      span_(span),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

namespace {

constexpr int kMaxNesting = 200;

AstNode make(NodeKind kind, SourceSpan span, std::string text = {}) {
  AstNode n;
  n.kind = kind;
  n.span = span;
  n.text = std::move(text);
  return n;
}

AstNode make_literal(SourceSpan span, LiteralValue value) {
  AstNode n = make(NodeKind::Literal, span);
  n.literal = std::move(value);
  return n;
}

bool is_comparison(const Token& t) {
  if (t.kind != TokenKind::Operator) return false;
  const auto& s = t.lexeme;
  return s == "==" || s == "!=" || s == "<" || s == "<=" || s == ">" ||
         s == ">=";
}

class Parser {
 public:
  explicit Parser(std::span<const Token> tokens) : tokens_(tokens) {
    if (tokens_.empty() || tokens_.back().kind != TokenKind::Eof) {
      throw ParseError(SourceSpan{}, "token stream ending in end of input",
                       "unterminated token stream");
    }
  }

  Program module() {
    AstNode root = make(NodeKind::Module, SourceSpan{1, 1, 0});
    while (!peek().kind_is(TokenKind::Eof)) {
      root.children.push_back(statement());
    }
    return root;
  }

 private:
  struct TokenRef {
    const Token& tok;
    bool kind_is(TokenKind k) const { return tok.kind == k; }
  };

  TokenRef peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return TokenRef{tokens_[i]};
  }
  const Token& current() const { return peek().tok; }

  const Token& advance() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(current().span, expected, describe(current()));
  }

  bool accept_op(std::string_view op) {
    if (current().is_op(op)) {
      advance();
      return true;
    }
    return false;
  }

  const Token& expect_op(std::string_view op) {
    if (!current().is_op(op)) fail("'" + std::string(op) + "'");
    return advance();
  }

  const Token& expect_keyword(std::string_view kw) {
    if (!current().is_keyword(kw)) fail("'" + std::string(kw) + "'");
    return advance();
  }

  const Token& expect_kind(TokenKind kind, const std::string& what) {
    if (current().kind != kind) fail(what);
    return advance();
  }

  // ---- statements -------------------------------------------------------

  AstNode statement() {
    const Token& t = current();
    if (t.kind == TokenKind::Keyword) {
      if (t.lexeme == "def") return function_def();
      if (t.lexeme == "if") return if_statement();
      if (t.lexeme == "while") return while_statement();
      if (t.lexeme == "for") return for_statement();
      if (t.lexeme == "elif" || t.lexeme == "else") fail("statement");
    }
    if (t.kind == TokenKind::Indent) fail("statement");
    AstNode s = simple_statement();
    expect_kind(TokenKind::Newline, "end of line");
    return s;
  }

  AstNode simple_statement() {
    const Token& t = current();
    if (t.is_keyword("return")) {
      if (function_depth_ == 0) fail("'return' inside a function");
      AstNode n = make(NodeKind::Return, advance().span);
      if (current().kind != TokenKind::Newline) n.children.push_back(expr());
      return n;
    }
    if (t.is_keyword("break") || t.is_keyword("continue")) {
      if (loop_depth_ == 0) fail("'" + t.lexeme + "' inside a loop");
      const Token& kw = advance();
      return make(kw.lexeme == "break" ? NodeKind::Break : NodeKind::Continue,
                  kw.span);
    }
    if (t.is_keyword("pass")) return make(NodeKind::Pass, advance().span);

    const SourceSpan start = t.span;
    AstNode lhs = expr();
    const Token& op = current();
    if (op.is_op("=")) {
      check_target(lhs);
      advance();
      AstNode n = make(NodeKind::Assign, start);
      n.children.push_back(std::move(lhs));
      n.children.push_back(expr());
      return n;
    }
    if (op.is_op("+=") || op.is_op("-=") || op.is_op("*=") ||
        op.is_op("//=")) {
      check_target(lhs);
      std::string symbol = advance().lexeme;
      AstNode n = make(NodeKind::AugAssign, start, std::move(symbol));
      n.children.push_back(std::move(lhs));
      n.children.push_back(expr());
      return n;
    }
    AstNode n = make(NodeKind::ExprStmt, start);
    n.children.push_back(std::move(lhs));
    return n;
  }

  void check_target(const AstNode& target) const {
    if (target.kind != NodeKind::Identifier && target.kind != NodeKind::Index) {
      throw ParseError(target.span, "assignment target (name or a[i])",
                       std::string(to_string(target.kind)));
    }
  }

  AstNode block() {
    expect_op(":");
    expect_kind(TokenKind::Newline, "end of line after ':'");
    const Token& indent = expect_kind(TokenKind::Indent, "indented block");
    AstNode b = make(NodeKind::Block, indent.span);
    while (current().kind != TokenKind::Dedent) {
      if (current().kind == TokenKind::Eof) fail("dedent");
      b.children.push_back(statement());
    }
    advance();
    return b;
  }

  AstNode identifier_node(const std::string& what) {
    const Token& name = expect_kind(TokenKind::Identifier, what);
    return make(NodeKind::Identifier, name.span, name.lexeme);
  }

  AstNode function_def() {
    const Token& kw = expect_keyword("def");
    const Token& name = expect_kind(TokenKind::Identifier, "function name");
    AstNode fn = make(NodeKind::FunctionDef, kw.span, name.lexeme);
    expect_op("(");
    if (!current().is_op(")")) {
      do {
        AstNode p = identifier_node("parameter name");
        for (const auto& existing : fn.children) {
          if (existing.text == p.text) {
            throw ParseError(p.span, "distinct parameter names",
                             "duplicate '" + p.text + "'");
          }
        }
        fn.children.push_back(std::move(p));
      } while (accept_op(","));
    }
    expect_op(")");
    const int saved_loops = std::exchange(loop_depth_, 0);
    ++function_depth_;
    fn.children.push_back(block());
    --function_depth_;
    loop_depth_ = saved_loops;
    return fn;
  }

  AstNode if_statement() {
    const Token& kw = advance();  // 'if' or 'elif'
    AstNode n = make(NodeKind::If, kw.span);
    n.children.push_back(expr());
    n.children.push_back(block());
    if (current().is_keyword("elif")) {
      AstNode tail = if_statement();
      AstNode else_block = make(NodeKind::Block, tail.span);
      else_block.children.push_back(std::move(tail));
      n.children.push_back(std::move(else_block));
    } else if (current().is_keyword("else")) {
      advance();
      n.children.push_back(block());
    }
    return n;
  }

  AstNode while_statement() {
    const Token& kw = expect_keyword("while");
    AstNode n = make(NodeKind::While, kw.span);
    n.children.push_back(expr());
    ++loop_depth_;
    n.children.push_back(block());
    --loop_depth_;
    return n;
  }

  AstNode for_statement() {
    const Token& kw = expect_keyword("for");
    AstNode n = make(NodeKind::For, kw.span);
    n.children.push_back(identifier_node("loop variable"));
    expect_keyword("in");
    n.children.push_back(expr());
    ++loop_depth_;
    n.children.push_back(block());
    --loop_depth_;
    return n;
  }

  // ---- expressions ------------------------------------------------------

  struct NestingGuard {
    Parser& p;
    explicit NestingGuard(Parser& parser) : p(parser) {
      if (++p.nesting_ > kMaxNesting) p.fail("shallower expression nesting");
    }
    ~NestingGuard() { --p.nesting_; }
  };

  AstNode expr() {
    NestingGuard guard(*this);
    return or_expr();
  }

  AstNode binary(NodeKind kind, const Token& op, AstNode lhs, AstNode rhs) {
    AstNode n = make(kind, op.span, op.lexeme);
    n.children.push_back(std::move(lhs));
    n.children.push_back(std::move(rhs));
    return n;
  }

  AstNode or_expr() {
    AstNode lhs = and_expr();
    while (current().is_keyword("or")) {
      const Token& op = advance();
      lhs = binary(NodeKind::BoolOp, op, std::move(lhs), and_expr());
    }
    return lhs;
  }

  AstNode and_expr() {
    AstNode lhs = not_expr();
    while (current().is_keyword("and")) {
      const Token& op = advance();
      lhs = binary(NodeKind::BoolOp, op, std::move(lhs), not_expr());
    }
    return lhs;
  }

  AstNode not_expr() {
    if (current().is_keyword("not")) {
      NestingGuard guard(*this);
      const Token& op = advance();
      AstNode n = make(NodeKind::UnaryOp, op.span, "not");
      n.children.push_back(not_expr());
      return n;
    }
    return comparison();
  }

  AstNode comparison() {
    AstNode lhs = arith();
    if (is_comparison(current())) {
      const Token& op = advance();
      lhs = binary(NodeKind::Compare, op, std::move(lhs), arith());
      if (is_comparison(current())) {
        fail("end of comparison (comparisons do not chain)");
      }
    }
    return lhs;
  }

  AstNode arith() {
    AstNode lhs = term();
    while (current().is_op("+") || current().is_op("-")) {
      const Token& op = advance();
      lhs = binary(NodeKind::BinaryOp, op, std::move(lhs), term());
    }
    return lhs;
  }

  AstNode term() {
    AstNode lhs = unary();
    while (current().is_op("*") || current().is_op("/") ||
           current().is_op("//") || current().is_op("%")) {
      const Token& op = advance();
      lhs = binary(NodeKind::BinaryOp, op, std::move(lhs), unary());
    }
    return lhs;
  }

  AstNode unary() {
    if (current().is_op("-")) {
      NestingGuard guard(*this);
      const Token& op = advance();
      AstNode operand = unary();
      // Negative numeric literals are literals, as in the source text.
      if (operand.kind == NodeKind::Literal) {
        if (auto* i = std::get_if<std::int64_t>(&operand.literal)) {
          *i = -*i;
          operand.span = op.span;
          return operand;
        }
        if (auto* d = std::get_if<double>(&operand.literal)) {
          *d = -*d;
          operand.span = op.span;
          return operand;
        }
      }
      AstNode n = make(NodeKind::UnaryOp, op.span, "-");
      n.children.push_back(std::move(operand));
      return n;
    }
    return power();
  }

  AstNode power() {
    AstNode base = postfix();
    if (current().is_op("**")) {
      NestingGuard guard(*this);
      const Token& op = advance();
      return binary(NodeKind::BinaryOp, op, std::move(base), unary());
    }
    return base;
  }

  void arguments(AstNode& call) {
    expect_op("(");
    if (!current().is_op(")")) {
      do {
        call.children.push_back(expr());
      } while (accept_op(","));
    }
    expect_op(")");
  }

  AstNode postfix() {
    AstNode node = atom();
    while (true) {
      if (current().is_op("(")) {
        AstNode call = make(NodeKind::Call, node.span);
        call.children.push_back(std::move(node));
        arguments(call);
        node = std::move(call);
      } else if (current().is_op(".")) {
        advance();
        const Token& name = expect_kind(TokenKind::Identifier, "method name");
        AstNode call = make(NodeKind::MethodCall, name.span, name.lexeme);
        call.children.push_back(std::move(node));
        if (!current().is_op("(")) fail("'(' after method name");
        arguments(call);
        node = std::move(call);
      } else if (current().is_op("[")) {
        const Token& open = advance();
        node = subscript(std::move(node), open);
      } else {
        return node;
      }
    }
  }

  AstNode subscript(AstNode object, const Token& open) {
    AstNode lower = current().is_op(":")
                        ? make_literal(open.span, std::monostate{})
                        : expr();
    if (accept_op(":")) {
      AstNode upper = current().is_op("]")
                          ? make_literal(current().span, std::monostate{})
                          : expr();
      expect_op("]");
      AstNode n = make(NodeKind::Slice, open.span);
      n.children.push_back(std::move(object));
      n.children.push_back(std::move(lower));
      n.children.push_back(std::move(upper));
      return n;
    }
    expect_op("]");
    AstNode n = make(NodeKind::Index, open.span);
    n.children.push_back(std::move(object));
    n.children.push_back(std::move(lower));
    return n;
  }

  AstNode atom() {
    const Token& t = current();
    switch (t.kind) {
      case TokenKind::IntLiteral: {
        advance();
        std::int64_t v = 0;
        std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), v);
        return make_literal(t.span, v);
      }
      case TokenKind::FloatLiteral: {
        advance();
        double v = 0;
        std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), v);
        return make_literal(t.span, v);
      }
      case TokenKind::StringLiteral:
        advance();
        return make_literal(t.span, t.lexeme);
      case TokenKind::Identifier:
        advance();
        return make(NodeKind::Identifier, t.span, t.lexeme);
      case TokenKind::Keyword:
        if (t.lexeme == "true" || t.lexeme == "false") {
          advance();
          return make_literal(t.span, t.lexeme == "true");
        }
        if (t.lexeme == "none") {
          advance();
          return make_literal(t.span, std::monostate{});
        }
        break;
      case TokenKind::Operator:
        if (t.lexeme == "(") {
          advance();
          AstNode inner = expr();
          expect_op(")");
          return inner;
        }
        if (t.lexeme == "[") return list_display();
        break;
      default:
        break;
    }
    fail("expression");
  }

  AstNode list_display() {
    const Token& open = expect_op("[");
    if (accept_op("]")) return make(NodeKind::ListLiteral, open.span);
    AstNode first = expr();
    if (current().is_keyword("for")) {
      advance();
      AstNode comp = make(NodeKind::ListComprehension, open.span);
      comp.children.push_back(std::move(first));
      comp.children.push_back(identifier_node("comprehension variable"));
      expect_keyword("in");
      comp.children.push_back(expr());
      if (current().is_keyword("if")) {
        advance();
        comp.children.push_back(expr());
      }
      expect_op("]");
      return comp;
    }
    AstNode list = make(NodeKind::ListLiteral, open.span);
    list.children.push_back(std::move(first));
    while (accept_op(",")) {
      if (current().is_op("]")) break;
      list.children.push_back(expr());
    }
    expect_op("]");
    return list;
  }

  std::span<const Token> tokens_;
  std::size_t pos_ = 0;
  int function_depth_ = 0;
  int loop_depth_ = 0;
  int nesting_ = 0;
};

}  // namespace

Program parse(std::span<const Token> tokens) { return Parser(tokens).module(); }

Program parse_source(std::string_view source) {
  const auto tokens = tokenize(source);
  return parse(tokens);
}

}  // namespace valtrace
