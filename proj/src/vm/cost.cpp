#include "valtrace/vm/cost.hpp"

#include <bit>

namespace valtrace {

namespace {

std::uint64_t n_log_n(std::uint64_t n) {
  const std::uint64_t m = n < 2 ? 2 : n;
  return n * static_cast<std::uint64_t>(std::bit_width(m - 1));
}

}  // namespace

std::uint64_t step_cost(CostOp op, std::uint64_t size) {
  switch (op) {
    case CostOp::Node:
    case CostOp::Len:
    case CostOp::Append:
    case CostOp::Abs:
    case CostOp::Int:
    case CostOp::Float:
    case CostOp::Str:
    case CostOp::Print:
    case CostOp::Range:
    case CostOp::Index:
    case CostOp::ComprehensionElement:
    case CostOp::HostBuiltin:
      return 1;
    case CostOp::Split:
    case CostOp::Lower:
    case CostOp::Upper:
    case CostOp::Min:
    case CostOp::Max:
    case CostOp::Sum:
    case CostOp::ListLiteral:
      return size;
    case CostOp::Sorted:
    case CostOp::Sort:
    case CostOp::Median:
      return n_log_n(size);
    case CostOp::Slice:
      return 1 + size;
  }
  return 1;
}

}  // namespace valtrace
