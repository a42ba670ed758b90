#include "valtrace/annotations/satisfaction.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "valtrace/annotations/invariants.hpp"

namespace valtrace {

std::string_view to_string(Severity severity) {
  return severity == Severity::Success ? "success" : "error";
}

void append_unique(std::vector<Message>& out, const std::vector<Message>& in) {
  for (const auto& m : in) {
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const Message& o) { return o.text == m.text; });
    if (!seen) out.push_back(m);
  }
}

bool tolerant_equal(const Value& observed, const Value& expected, double atol, double rtol) {
  if (observed.is_number() && expected.is_number()) {
    if (atol == 0 && rtol == 0) return values_equal(observed, expected);
    if (values_equal(observed, expected)) return true;
    const double x = observed.as_number();
    const double y = expected.as_number();
    return std::fabs(x - y) <= atol + rtol * std::fabs(y);
  }
  if (observed.is_list() && expected.is_list()) {
    const auto& a = observed.items();
    const auto& b = expected.items();
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!tolerant_equal(a[i], b[i], atol, rtol)) return false;
    }
    return true;
  }
  if (observed.tag() != expected.tag()) return false;
  return values_equal(observed, expected);
}

namespace {

class ExpectedMatcher {
 public:
  explicit ExpectedMatcher(const Annotation& a) : a_(a) {
    for (const auto& name : a.invariants) {
      canonicalizers_.push_back(InvariantRegistry::global().get(name));
    }
    expected_ = canonical(a.expected);
    exact_ = a.atol == 0 && a.rtol == 0 && a.invariants.empty();
    if (exact_) expected_fingerprint_ = fingerprint_of(a.expected);
  }

  bool operator()(const Value& observed) const {
    return tolerant_equal(canonical(observed), expected_, a_.atol, a_.rtol);
  }

  bool operator()(const FootprintEntry& e) const {
    if (e.fingerprint_only) return exact_ && e.fingerprint == expected_fingerprint_;
    return (*this)(e.value);
  }

 private:
  Value canonical(const Value& v) const {
    Value out = v;
    for (const auto& fn : canonicalizers_) out = fn(out);
    return out;
  }

  const Annotation& a_;
  std::vector<Canonicalizer> canonicalizers_;
  Value expected_;
  bool exact_ = false;
  std::uint64_t expected_fingerprint_ = 0;
};

// A satisfied `not` has no first step of its own; inside a combinator it
// counts as holding from the start of execution.
std::uint64_t step_of(const Satisfaction& s) { return s.first_step.value_or(0); }

void own_message(const Annotation& a, bool ok, std::vector<Message>& out) {
  if (ok && a.success_message) out.push_back({*a.success_message, Severity::Success});
  if (!ok && a.failure_message) out.push_back({*a.failure_message, Severity::Error});
}

Satisfaction evaluate(const Annotation& a, const Footprint& fp) {
  Satisfaction s;
  std::vector<Satisfaction> kids;
  kids.reserve(a.children.size());
  for (const auto& c : a.children) kids.push_back(evaluate(*c, fp));

  auto all_ok = [&] {
    return std::all_of(kids.begin(), kids.end(), [](const Satisfaction& k) { return k.satisfied; });
  };
  auto max_step = [&] {
    std::uint64_t m = 0;
    for (const auto& k : kids) m = std::max(m, step_of(k));
    return m;
  };

  switch (a.kind) {
    case AnnotationKind::ExpectedValue: {
      const ExpectedMatcher match(a);
      for (const auto& e : fp.entries) {
        if (match(e)) {
          s.satisfied = true;
          s.first_step = e.step;
          break;
        }
      }
      break;
    }
    case AnnotationKind::Not:
      s.satisfied = !kids[0].satisfied;
      break;
    case AnnotationKind::And:
      s.satisfied = all_ok();
      if (s.satisfied) s.first_step = max_step();
      break;
    case AnnotationKind::Or:
      for (const auto& k : kids) {
        if (!k.satisfied) continue;
        s.satisfied = true;
        s.first_step = s.first_step ? std::min(*s.first_step, step_of(k)) : step_of(k);
      }
      break;
    case AnnotationKind::Before:
    case AnnotationKind::After: {
      const bool is_before = a.kind == AnnotationKind::Before;
      const Satisfaction& early = is_before ? kids[0] : kids[1];
      const Satisfaction& late = is_before ? kids[1] : kids[0];
      s.satisfied = early.satisfied && late.satisfied && step_of(early) < step_of(late);
      if (s.satisfied) s.first_step = step_of(late);
      break;
    }
    case AnnotationKind::Collection:
      s.satisfied = all_ok();
      if (s.satisfied && a.ordered) {
        for (std::size_t i = 1; i < kids.size(); ++i) {
          if (step_of(kids[i]) < step_of(kids[i - 1])) s.satisfied = false;
        }
      }
      if (s.satisfied) s.first_step = max_step();
      break;
    case AnnotationKind::StepBudget:
      s.satisfied = fp.total_steps <= static_cast<std::uint64_t>(a.budget);
      if (s.satisfied) s.first_step = fp.total_steps;
      break;
  }

  own_message(a, s.satisfied, s.messages);
  for (const auto& k : kids) append_unique(s.messages, k.messages);
  return s;
}

}  // namespace

bool matches(const Annotation& annotation, const Value& observed) {
  if (annotation.kind != AnnotationKind::ExpectedValue) {
    throw std::invalid_argument("matches() requires an expected-value annotation");
  }
  return ExpectedMatcher(annotation)(observed);
}

Satisfaction satisfied(const Annotation& annotation, const Footprint& footprint) {
  return evaluate(annotation, footprint);
}

}  // namespace valtrace
