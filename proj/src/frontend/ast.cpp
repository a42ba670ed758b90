#include "valtrace/frontend/ast.hpp"

#include <bit>

namespace valtrace {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Module: return "module";
    case NodeKind::FunctionDef: return "function-def";
    case NodeKind::If: return "if";
    case NodeKind::While: return "while";
    case NodeKind::For: return "for";
    case NodeKind::Return: return "return";
    case NodeKind::Break: return "break";
    case NodeKind::Continue: return "continue";
    case NodeKind::Pass: return "pass";
    case NodeKind::Assign: return "assign";
    case NodeKind::AugAssign: return "aug-assign";
    case NodeKind::ExprStmt: return "expr-stmt";
    case NodeKind::BinaryOp: return "binary-op";
    case NodeKind::UnaryOp: return "unary-op";
    case NodeKind::Compare: return "compare";
    case NodeKind::BoolOp: return "bool-op";
    case NodeKind::Call: return "call";
    case NodeKind::MethodCall: return "method-call";
    case NodeKind::Index: return "index";
    case NodeKind::Slice: return "slice";
    case NodeKind::ListLiteral: return "list-literal";
    case NodeKind::ListComprehension: return "list-comprehension";
    case NodeKind::Identifier: return "identifier";
    case NodeKind::Literal: return "literal";
    case NodeKind::Block: return "block";
    case NodeKind::Observe: return "observe";
  }
  return "node";
}

bool is_expression(NodeKind kind) {
  switch (kind) {
    case NodeKind::BinaryOp:
    case NodeKind::UnaryOp:
    case NodeKind::Compare:
    case NodeKind::BoolOp:
    case NodeKind::Call:
    case NodeKind::MethodCall:
    case NodeKind::Index:
    case NodeKind::Slice:
    case NodeKind::ListLiteral:
    case NodeKind::ListComprehension:
    case NodeKind::Identifier:
    case NodeKind::Literal:
    case NodeKind::Observe:
      return true;
    default:
      return false;
  }
}

namespace {

bool literal_equal(const LiteralValue& a, const LiteralValue& b) {
  if (a.index() != b.index()) return false;
  if (const double* x = std::get_if<double>(&a)) {
    return std::bit_cast<std::uint64_t>(*x) ==
           std::bit_cast<std::uint64_t>(std::get<double>(b));
  }
  return a == b;
}

}  // namespace

bool structurally_equal(const AstNode& a, const AstNode& b) {
  if (a.kind != b.kind || a.text != b.text || a.capture_id != b.capture_id ||
      a.children.size() != b.children.size() ||
      !literal_equal(a.literal, b.literal)) {
    return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structurally_equal(a.children[i], b.children[i])) return false;
  }
  return true;
}

AstNode strip_observers(const AstNode& node) {
  if (node.kind == NodeKind::Observe) return strip_observers(node.children.at(0));
  AstNode out;
  out.kind = node.kind;
  out.span = node.span;
  out.text = node.text;
  out.literal = node.literal;
  out.children.reserve(node.children.size());
  for (const auto& c : node.children) out.children.push_back(strip_observers(c));
  return out;
}

}  // namespace valtrace
