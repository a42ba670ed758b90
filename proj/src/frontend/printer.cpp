#include "valtrace/frontend/printer.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace valtrace {

std::string format_float(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  std::string s(buf, end);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

const AstNode& unwrap(const AstNode& n) {
  return n.kind == NodeKind::Observe ? unwrap(n.children.at(0)) : n;
}

bool is_none_literal(const AstNode& n) {
  const AstNode& u = unwrap(n);
  return u.kind == NodeKind::Literal &&
         std::holds_alternative<std::monostate>(u.literal);
}

void print_expr(std::ostream& os, const AstNode& raw) {
  const AstNode& n = unwrap(raw);
  switch (n.kind) {
    case NodeKind::Literal:
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
              os << "none";
            } else if constexpr (std::is_same_v<T, bool>) {
              os << (v ? "true" : "false");
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
              os << v;
            } else if constexpr (std::is_same_v<T, double>) {
              os << format_float(v);
            } else {
              os << quote(v);
            }
          },
          n.literal);
      return;
    case NodeKind::Identifier:
      os << n.text;
      return;
    case NodeKind::BinaryOp:
    case NodeKind::Compare:
    case NodeKind::BoolOp:
      os << '(';
      print_expr(os, n.child(0));
      os << ' ' << n.text << ' ';
      print_expr(os, n.child(1));
      os << ')';
      return;
    case NodeKind::UnaryOp:
      os << '(' << n.text << (n.text == "not" ? " " : "");
      print_expr(os, n.child(0));
      os << ')';
      return;
    case NodeKind::Call:
    case NodeKind::MethodCall: {
      print_expr(os, n.child(0));
      if (n.kind == NodeKind::MethodCall) os << '.' << n.text;
      os << '(';
      for (std::size_t i = 1; i < n.children.size(); ++i) {
        if (i > 1) os << ", ";
        print_expr(os, n.children[i]);
      }
      os << ')';
      return;
    }
    case NodeKind::Index:
      print_expr(os, n.child(0));
      os << '[';
      print_expr(os, n.child(1));
      os << ']';
      return;
    case NodeKind::Slice:
      print_expr(os, n.child(0));
      os << '[';
      if (!is_none_literal(n.child(1))) print_expr(os, n.child(1));
      os << ':';
      if (!is_none_literal(n.child(2))) print_expr(os, n.child(2));
      os << ']';
      return;
    case NodeKind::ListLiteral:
      os << '[';
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i > 0) os << ", ";
        print_expr(os, n.children[i]);
      }
      os << ']';
      return;
    case NodeKind::ListComprehension:
      os << '[';
      print_expr(os, n.child(0));
      os << " for ";
      print_expr(os, n.child(1));
      os << " in ";
      print_expr(os, n.child(2));
      if (n.children.size() > 3) {
        os << " if ";
        print_expr(os, n.child(3));
      }
      os << ']';
      return;
    default:
      os << "<" << to_string(n.kind) << ">";
  }
}

void print_stmt(std::ostream& os, const AstNode& n, int depth);

void print_block(std::ostream& os, const AstNode& block, int depth) {
  os << ":\n";
  for (const auto& s : block.children) print_stmt(os, s, depth + 1);
}

void print_stmt(std::ostream& os, const AstNode& n, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 4, ' ');
  switch (n.kind) {
    case NodeKind::FunctionDef: {
      os << pad << "def " << n.text << '(';
      for (std::size_t i = 0; i + 1 < n.children.size(); ++i) {
        if (i > 0) os << ", ";
        print_expr(os, n.children[i]);
      }
      os << ')';
      print_block(os, n.children.back(), depth);
      return;
    }
    case NodeKind::If: {
      os << pad << "if ";
      const AstNode* node = &n;
      while (true) {
        print_expr(os, node->child(0));
        print_block(os, node->child(1), depth);
        if (node->children.size() < 3) return;
        const AstNode& else_block = node->child(2);
        if (else_block.children.size() == 1 &&
            else_block.child(0).kind == NodeKind::If) {
          os << pad << "elif ";
          node = &else_block.child(0);
          continue;
        }
        os << pad << "else";
        print_block(os, else_block, depth);
        return;
      }
    }
    case NodeKind::While:
      os << pad << "while ";
      print_expr(os, n.child(0));
      print_block(os, n.child(1), depth);
      return;
    case NodeKind::For:
      os << pad << "for ";
      print_expr(os, n.child(0));
      os << " in ";
      print_expr(os, n.child(1));
      print_block(os, n.child(2), depth);
      return;
    case NodeKind::Return:
      os << pad << "return";
      if (!n.children.empty()) {
        os << ' ';
        print_expr(os, n.child(0));
      }
      os << '\n';
      return;
    case NodeKind::Break: os << pad << "break\n"; return;
    case NodeKind::Continue: os << pad << "continue\n"; return;
    case NodeKind::Pass: os << pad << "pass\n"; return;
    case NodeKind::Assign:
    case NodeKind::AugAssign:
      os << pad;
      print_expr(os, n.child(0));
      os << ' ' << (n.kind == NodeKind::Assign ? "=" : n.text) << ' ';
      print_expr(os, n.child(1));
      os << '\n';
      return;
    case NodeKind::ExprStmt:
      os << pad;
      print_expr(os, n.child(0));
      os << '\n';
      return;
    case NodeKind::Block:
      for (const auto& s : n.children) print_stmt(os, s, depth);
      return;
    default:
      os << pad;
      print_expr(os, n);
      os << '\n';
  }
}

}  // namespace

std::string print_expression(const AstNode& expr) {
  std::ostringstream os;
  print_expr(os, expr);
  return os.str();
}

std::string print_program(const Program& program) {
  std::ostringstream os;
  for (const auto& s : program.children) print_stmt(os, s, 0);
  return os.str();
}

}  // namespace valtrace
