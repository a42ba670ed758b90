#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "valtrace/annotations/annotation.hpp"
#include "valtrace/vm/footprint.hpp"

namespace valtrace {

enum class Severity { Success, Error };

std::string_view to_string(Severity severity);

struct Message {
  std::string text;
  Severity severity = Severity::Success;
  friend bool operator==(const Message&, const Message&) = default;
};

struct Satisfaction {
  bool satisfied = false;
  /// Earliest step at which the annotation holds. Absent for `not` and for
  /// unsatisfied annotations.
  std::optional<std::uint64_t> first_step;
  std::vector<Message> messages;
};

/// Leaf comparison: numbers x (observed) and y (expected) match when
/// |x - y| <= atol + rtol * |y|; with both tolerances zero, int and float
/// must be numerically equal. Other leaves need exact equality; lists match
/// element-wise.
bool tolerant_equal(const Value& observed, const Value& expected, double atol,
                    double rtol);

/// Applies the annotation's invariants to both sides, then tolerant_equal.
/// Requires kind == ExpectedValue.
bool matches(const Annotation& annotation, const Value& observed);

Satisfaction satisfied(const Annotation& annotation, const Footprint& footprint);

/// Appends messages whose text has not been seen yet.
void append_unique(std::vector<Message>& out, const std::vector<Message>& in);

}  // namespace valtrace
