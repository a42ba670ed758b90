#pragma once

#include <cstdint>

namespace valtrace {

/// Operations with a step cost. Node is charged once for every evaluated
/// statement or expression node; the other entries are charged in addition
/// to the Node cost of the call, subscript, or display that triggers them.
enum class CostOp {
  Node,
  Len,
  Append,
  Abs,
  Int,
  Float,
  Str,
  Print,
  Range,
  Split,
  Lower,
  Upper,
  Sorted,
  Sort,
  Median,
  Min,
  Max,
  Sum,
  Index,
  Slice,
  ListLiteral,
  ComprehensionElement,
  HostBuiltin,
};

/// Deterministic step cost. `size` is the operation's operand size: element
/// count for sorting/min/max/sum, character count for split/lower/upper,
/// result length for slices, and element count for list displays.
///
///   Node, Len, Append, Abs, Int, Float, Str, Print, Range, Index,
///   ComprehensionElement, HostBuiltin      1
///   Split, Lower, Upper, Min, Max, Sum    size
///   Sorted, Sort, Median                  n * ceil(log2(max(n, 2)))
///   Slice                                 1 + size
///   ListLiteral                           size
std::uint64_t step_cost(CostOp op, std::uint64_t size = 0);

}  // namespace valtrace
