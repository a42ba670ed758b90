#include "valtrace/annotations/annotation.hpp"

#include <array>
#include <bit>
#include <cmath>

#include "valtrace/annotations/invariants.hpp"

namespace valtrace {

namespace {

constexpr std::array<std::pair<AnnotationKind, std::string_view>, 8> kKindNames{{
    {AnnotationKind::ExpectedValue, "expected-value"},
    {AnnotationKind::Not, "not"},
    {AnnotationKind::And, "and"},
    {AnnotationKind::Or, "or"},
    {AnnotationKind::Before, "before"},
    {AnnotationKind::After, "after"},
    {AnnotationKind::Collection, "collection"},
    {AnnotationKind::StepBudget, "step-budget"},
}};

bool contains_handle(const Value& v) {
  if (v.is_handle()) return true;
  if (!v.is_list()) return false;
  for (const auto& item : v.items()) {
    if (contains_handle(item)) return true;
  }
  return false;
}

void require_children(const Annotation& a, std::size_t lo, std::size_t hi) {
  const std::size_t n = a.children.size();
  if (n < lo || n > hi) {
    std::string expected = lo == hi ? std::to_string(lo) : "at least " + std::to_string(lo);
    throw ArityError(std::string(to_string(a.kind)) + " takes " + expected +
                     " operand" + (lo == 1 && hi == 1 ? "" : "s") + ", got " +
                     std::to_string(n));
  }
  for (const auto& c : a.children) {
    if (!c) throw std::invalid_argument(std::string(to_string(a.kind)) + " operand is null");
  }
}

void require_tolerance(double t, const char* name) {
  if (!std::isfinite(t) || t < 0) {
    throw std::invalid_argument(std::string(name) + " must be finite and non-negative");
  }
}

Annotation with_messages(AnnotationKind kind, Messages m) {
  Annotation a;
  a.kind = kind;
  a.success_message = std::move(m.success);
  a.failure_message = std::move(m.failure);
  return a;
}

AnnotationPtr binary(AnnotationKind kind, AnnotationPtr x, AnnotationPtr y, Messages m) {
  Annotation a = with_messages(kind, std::move(m));
  a.children = {std::move(x), std::move(y)};
  return make_annotation(std::move(a));
}

}  // namespace

std::string_view to_string(AnnotationKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<AnnotationKind> parse_annotation_kind(std::string_view text) {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  return std::nullopt;
}

AnnotationPtr make_annotation(Annotation a) {
  switch (a.kind) {
    case AnnotationKind::ExpectedValue:
      require_children(a, 0, 0);
      require_tolerance(a.atol, "atol");
      require_tolerance(a.rtol, "rtol");
      if (contains_handle(a.expected)) {
        throw std::invalid_argument("expected value must not contain an annotation");
      }
      for (const auto& name : a.invariants) {
        if (!InvariantRegistry::global().contains(name)) throw UnknownInvariantError(name);
      }
      a.expected = a.expected.snapshot();
      break;
    case AnnotationKind::Not: require_children(a, 1, 1); break;
    case AnnotationKind::And:
    case AnnotationKind::Or:
    case AnnotationKind::Before:
    case AnnotationKind::After: require_children(a, 2, 2); break;
    case AnnotationKind::Collection: require_children(a, 1, SIZE_MAX); break;
    case AnnotationKind::StepBudget:
      require_children(a, 0, 0);
      if (a.budget < 0) throw std::invalid_argument("step budget must be non-negative");
      break;
  }
  return std::make_shared<const Annotation>(std::move(a));
}

AnnotationPtr expected_value(Value expected, double atol, double rtol,
                             std::vector<std::string> invariants, Messages messages) {
  Annotation a = with_messages(AnnotationKind::ExpectedValue, std::move(messages));
  a.expected = std::move(expected);
  a.atol = atol;
  a.rtol = rtol;
  a.invariants = std::move(invariants);
  return make_annotation(std::move(a));
}

AnnotationPtr not_(AnnotationPtr x, Messages messages) {
  Annotation a = with_messages(AnnotationKind::Not, std::move(messages));
  a.children = {std::move(x)};
  return make_annotation(std::move(a));
}

AnnotationPtr and_(AnnotationPtr a, AnnotationPtr b, Messages messages) {
  return binary(AnnotationKind::And, std::move(a), std::move(b), std::move(messages));
}

AnnotationPtr or_(AnnotationPtr a, AnnotationPtr b, Messages messages) {
  return binary(AnnotationKind::Or, std::move(a), std::move(b), std::move(messages));
}

AnnotationPtr before(AnnotationPtr a, AnnotationPtr b, Messages messages) {
  return binary(AnnotationKind::Before, std::move(a), std::move(b), std::move(messages));
}

AnnotationPtr after(AnnotationPtr a, AnnotationPtr b, Messages messages) {
  return binary(AnnotationKind::After, std::move(a), std::move(b), std::move(messages));
}

AnnotationPtr collection(bool ordered, std::vector<AnnotationPtr> children, Messages messages) {
  Annotation a = with_messages(AnnotationKind::Collection, std::move(messages));
  a.ordered = ordered;
  a.children = std::move(children);
  return make_annotation(std::move(a));
}

AnnotationPtr step_budget(std::int64_t budget, Messages messages) {
  Annotation a = with_messages(AnnotationKind::StepBudget, std::move(messages));
  a.budget = budget;
  return make_annotation(std::move(a));
}

bool annotations_equal(const Annotation& a, const Annotation& b) {
  if (a.kind != b.kind || a.success_message != b.success_message ||
      a.failure_message != b.failure_message || a.children.size() != b.children.size()) {
    return false;
  }
  switch (a.kind) {
    case AnnotationKind::ExpectedValue:
      if (!identical(a.expected, b.expected) || a.invariants != b.invariants ||
          std::bit_cast<std::uint64_t>(a.atol) != std::bit_cast<std::uint64_t>(b.atol) ||
          std::bit_cast<std::uint64_t>(a.rtol) != std::bit_cast<std::uint64_t>(b.rtol)) {
        return false;
      }
      break;
    case AnnotationKind::Collection:
      if (a.ordered != b.ordered) return false;
      break;
    case AnnotationKind::StepBudget:
      if (a.budget != b.budget) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!annotations_equal(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

}  // namespace valtrace
