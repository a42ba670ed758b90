#include "valtrace/vm/footprint.hpp"

#include <stdexcept>

#include "valtrace/support/hash.hpp"

namespace valtrace {

std::uint64_t fingerprint_of(const Value& v) { return hash64(canonical_text(v)); }

std::string_view to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::Completed: return "completed";
    case OutcomeKind::RuntimeError: return "runtime-error";
    case OutcomeKind::StepLimitExceeded: return "step-limit-exceeded";
  }
  return "unknown";
}

void ExecutionLimits::validate() const {
  if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
  if (max_footprint_entries == 0) {
    throw std::invalid_argument("max_footprint_entries must be positive");
  }
  if (max_snapshot_elements == 0) {
    throw std::invalid_argument("max_snapshot_elements must be positive");
  }
}

std::string dump_footprint(const Footprint& footprint) {
  std::string out;
  for (const auto& e : footprint.entries) {
    out += std::to_string(e.step);
    out += '\t';
    out += std::to_string(e.capture_id);
    out += '\t';
    if (e.fingerprint_only) {
      out += "{\"t\":\"fingerprint\",\"v\":\"" + to_hex64(e.fingerprint) + "\"}";
    } else {
      out += canonical_text(e.value);
    }
    out += '\n';
  }
  return out;
}

std::string describe_outcome(const Outcome& outcome) {
  switch (outcome.kind) {
    case OutcomeKind::Completed: return "completed";
    case OutcomeKind::StepLimitExceeded: return "step-limit-exceeded";
    case OutcomeKind::RuntimeError:
      return "runtime-error: " + outcome.unit + ":" + to_string(outcome.span) +
             ": " + outcome.message;
  }
  return "unknown";
}

}  // namespace valtrace
