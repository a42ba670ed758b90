#pragma once

#include <string_view>
#include <vector>

#include "valtrace/frontend/ast.hpp"

namespace valtrace {

enum class CaptureKind {
  Subexpression,
  Assignment,
  Argument,
  ReturnValue,
  LoopElement,
};

std::string_view to_string(CaptureKind kind);

struct CapturePoint {
  int id = 0;
  SourceSpan origin;
  CaptureKind kind = CaptureKind::Subexpression;
};

/// A program whose value-producing expressions are wrapped in Observe nodes.
///
/// Observe placement:
///  - expression position: the wrapped expression's value is recorded;
///  - binding position (assignment/for/comprehension target, parameter): the
///    bound name's value, or for `a[i] = v` the container `a`, is recorded
///    after the store;
///  - around an in-place mutator call (`sort`, `append`): the receiver is
///    recorded after the call.
struct InstrumentedProgram {
  Program program;
  std::vector<CapturePoint> capture_points;
  Program original;
};

/// Inserts capture points. Ids are dense and follow pre-order of the original
/// AST. Literals and bare identifier reads are left unwrapped.
InstrumentedProgram rewrite(const Program& program);

/// Removes every capture wrapper.
Program strip(const InstrumentedProgram& instrumented);

/// Wraps a program without adding any capture points, for uninstrumented
/// execution.
InstrumentedProgram without_captures(const Program& program);

/// True for method names that mutate their receiver in place.
bool is_mutator_method(std::string_view name);

}  // namespace valtrace
