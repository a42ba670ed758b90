#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "valtrace/vm/value.hpp"

namespace valtrace {

enum class AnnotationKind {
  ExpectedValue,
  Not,
  And,
  Or,
  Before,
  After,
  Collection,
  StepBudget,
};

/// "expected-value", "not", "and", "or", "before", "after", "collection",
/// "step-budget".
std::string_view to_string(AnnotationKind kind);
std::optional<AnnotationKind> parse_annotation_kind(std::string_view text);

/// Wrong number of operands for a combinator.
class ArityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Messages {
  std::optional<std::string> success;
  std::optional<std::string> failure;
};

struct Annotation;
using AnnotationPtr = std::shared_ptr<const Annotation>;

/// Immutable once built; construct through the factory functions below,
/// which enforce arity and field constraints.
struct Annotation {
  AnnotationKind kind = AnnotationKind::ExpectedValue;
  Value expected;
  double atol = 0.0;
  double rtol = 0.0;
  std::vector<std::string> invariants;
  std::vector<AnnotationPtr> children;
  bool ordered = false;
  std::int64_t budget = 0;
  std::optional<std::string> success_message;
  std::optional<std::string> failure_message;
};

/// Throws std::invalid_argument for negative or non-finite tolerances and
/// for values containing annotation handles; UnknownInvariantError for
/// names missing from the global registry.
AnnotationPtr expected_value(Value expected, double atol = 0.0,
                             double rtol = 0.0,
                             std::vector<std::string> invariants = {},
                             Messages messages = {});

AnnotationPtr not_(AnnotationPtr a, Messages messages = {});
AnnotationPtr and_(AnnotationPtr a, AnnotationPtr b, Messages messages = {});
AnnotationPtr or_(AnnotationPtr a, AnnotationPtr b, Messages messages = {});
AnnotationPtr before(AnnotationPtr a, AnnotationPtr b, Messages messages = {});
AnnotationPtr after(AnnotationPtr a, AnnotationPtr b, Messages messages = {});
AnnotationPtr collection(bool ordered, std::vector<AnnotationPtr> children,
                         Messages messages = {});
/// Throws std::invalid_argument for a negative budget.
AnnotationPtr step_budget(std::int64_t budget, Messages messages = {});

/// Generic constructor used by deserialization. Validates like the
/// factories; throws ArityError on wrong child counts.
AnnotationPtr make_annotation(Annotation fields);

/// Deep equality: values tag-exact, tolerances bitwise, trees by shape.
bool annotations_equal(const Annotation& a, const Annotation& b);

}  // namespace valtrace
