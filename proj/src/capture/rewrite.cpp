#include "valtrace/capture/rewrite.hpp"

#include <utility>

namespace valtrace {

std::string_view to_string(CaptureKind kind) {
  switch (kind) {
    case CaptureKind::Subexpression: return "subexpression";
    case CaptureKind::Assignment: return "assignment";
    case CaptureKind::Argument: return "argument";
    case CaptureKind::ReturnValue: return "return-value";
    case CaptureKind::LoopElement: return "loop-element";
  }
  return "capture";
}

bool is_mutator_method(std::string_view name) {
  return name == "sort" || name == "append";
}

namespace {

bool produces_captured_value(NodeKind kind) {
  return is_expression(kind) && kind != NodeKind::Identifier &&
         kind != NodeKind::Literal && kind != NodeKind::Observe;
}

class Rewriter {
 public:
  InstrumentedProgram run(const Program& program) {
    InstrumentedProgram out;
    out.original = program;
    out.program = node(program);
    out.capture_points = std::move(points_);
    return out;
  }

 private:
  int allocate(const AstNode& origin, CaptureKind kind) {
    const int id = static_cast<int>(points_.size());
    points_.push_back(CapturePoint{id, origin.span, kind});
    return id;
  }

  static AstNode wrap(int id, AstNode inner) {
    AstNode obs;
    obs.kind = NodeKind::Observe;
    obs.span = inner.span;
    obs.capture_id = id;
    obs.children.push_back(std::move(inner));
    return obs;
  }

  AstNode copy_shell(const AstNode& n) {
    AstNode out;
    out.kind = n.kind;
    out.span = n.span;
    out.text = n.text;
    out.literal = n.literal;
    out.children.reserve(n.children.size());
    return out;
  }

  AstNode expression(const AstNode& n) {
    if (!produces_captured_value(n.kind)) return node(n);
    const int id = allocate(n, CaptureKind::Subexpression);
    return wrap(id, node(n));
  }

  // Assignment-style target: the binding itself gets a capture; for `a[i]`
  // targets the object and index expressions are still reads.
  AstNode target(const AstNode& t, CaptureKind kind) {
    const int id = allocate(t, kind);
    AstNode inner = copy_shell(t);
    for (const auto& c : t.children) inner.children.push_back(expression(c));
    return wrap(id, std::move(inner));
  }

  AstNode node(const AstNode& n) {
    switch (n.kind) {
      case NodeKind::FunctionDef: {
        AstNode out = copy_shell(n);
        for (std::size_t i = 0; i + 1 < n.children.size(); ++i) {
          out.children.push_back(target(n.children[i], CaptureKind::Argument));
        }
        out.children.push_back(node(n.children.back()));
        return out;
      }
      case NodeKind::Assign:
      case NodeKind::AugAssign: {
        AstNode out = copy_shell(n);
        out.children.push_back(target(n.child(0), CaptureKind::Assignment));
        out.children.push_back(expression(n.child(1)));
        return out;
      }
      case NodeKind::For: {
        AstNode out = copy_shell(n);
        out.children.push_back(target(n.child(0), CaptureKind::LoopElement));
        out.children.push_back(expression(n.child(1)));
        out.children.push_back(node(n.child(2)));
        return out;
      }
      case NodeKind::ListComprehension: {
        AstNode out = copy_shell(n);
        out.children.push_back(expression(n.child(0)));
        out.children.push_back(target(n.child(1), CaptureKind::LoopElement));
        for (std::size_t i = 2; i < n.children.size(); ++i) {
          out.children.push_back(expression(n.children[i]));
        }
        return out;
      }
      case NodeKind::Return: {
        AstNode out = copy_shell(n);
        if (!n.children.empty()) {
          const int id = allocate(n, CaptureKind::ReturnValue);
          out.children.push_back(wrap(id, expression(n.child(0))));
        }
        return out;
      }
      case NodeKind::ExprStmt: {
        // A statement's result is observed even when it is a bare literal or
        // name, so a driver line like `0` still leaves a trace.
        AstNode out = copy_shell(n);
        const AstNode& e = n.child(0);
        out.children.push_back(produces_captured_value(e.kind)
                                   ? expression(e)
                                   : wrap(allocate(e, CaptureKind::Subexpression), node(e)));
        return out;
      }
      case NodeKind::Call: {
        // The callee is a name, not a value read.
        AstNode out = copy_shell(n);
        out.children.push_back(node(n.child(0)));
        for (std::size_t i = 1; i < n.children.size(); ++i) {
          out.children.push_back(expression(n.children[i]));
        }
        return out;
      }
      default: {
        AstNode out = copy_shell(n);
        const bool stmt_container = n.kind == NodeKind::Module ||
                                    n.kind == NodeKind::Block;
        for (const auto& c : n.children) {
          out.children.push_back(stmt_container ? node(c) : expression(c));
        }
        return out;
      }
    }
  }

  std::vector<CapturePoint> points_;
};

}  // namespace

InstrumentedProgram rewrite(const Program& program) {
  return Rewriter{}.run(program);
}

Program strip(const InstrumentedProgram& instrumented) {
  return strip_observers(instrumented.program);
}

InstrumentedProgram without_captures(const Program& program) {
  return InstrumentedProgram{program, {}, program};
}

}  // namespace valtrace
