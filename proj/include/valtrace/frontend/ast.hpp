#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "valtrace/frontend/source_span.hpp"

namespace valtrace {

enum class NodeKind {
  Module,
  FunctionDef,
  If,
  While,
  For,
  Return,
  Break,
  Continue,
  Pass,
  Assign,
  AugAssign,
  ExprStmt,
  BinaryOp,
  UnaryOp,
  Compare,
  BoolOp,
  Call,
  MethodCall,
  Index,
  Slice,
  ListLiteral,
  ListComprehension,
  Identifier,
  Literal,
  // Statement list of a compound statement body.
  Block,
  // Capture wrapper inserted by the rewrite pass; never produced by parse().
  Observe,
};

std::string_view to_string(NodeKind kind);

/// none | bool | int | float | string
using LiteralValue =
    std::variant<std::monostate, bool, std::int64_t, double, std::string>;

// Child layout per kind:
//   Module            stmts...
//   FunctionDef       text=name; [Identifier param]..., Block
//   If                cond, Block [, Block]        (elif nests an If in else)
//   While             cond, Block
//   For               Identifier target, iterable, Block
//   Return            [value]
//   Assign            target, value                (target: Identifier | Index)
//   AugAssign         text="+=" etc.; target, value
//   ExprStmt          expr
//   BinaryOp/Compare  text=op; lhs, rhs
//   BoolOp            text="and"|"or"; lhs, rhs
//   UnaryOp           text="-"|"not"; operand
//   Call              callee, args...
//   MethodCall        text=method; receiver, args...
//   Index             object, index
//   Slice             object, lower, upper         (missing bound = none literal)
//   ListLiteral       elements...
//   ListComprehension element, Identifier target, iterable [, condition]
//   Observe           capture_id; wrapped node
struct AstNode {
  NodeKind kind = NodeKind::Module;
  std::vector<AstNode> children;
  SourceSpan span;
  std::string text;
  LiteralValue literal;
  int capture_id = -1;

  const AstNode& child(std::size_t i) const { return children.at(i); }
};

/// A parsed module; the root is always a Module node.
using Program = AstNode;

/// Deep comparison ignoring spans. Float literals compare bitwise.
bool structurally_equal(const AstNode& a, const AstNode& b);

/// Returns `node` with every Observe wrapper replaced by its child.
AstNode strip_observers(const AstNode& node);

/// True for node kinds that appear in expression position.
bool is_expression(NodeKind kind);

}  // namespace valtrace
