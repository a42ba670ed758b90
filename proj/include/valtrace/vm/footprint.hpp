#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "valtrace/frontend/source_span.hpp"
#include "valtrace/vm/value.hpp"

namespace valtrace {

/// Capture ids recorded for the student (or instructor) program are shifted
/// by this stride; driver ids are recorded unshifted.
inline constexpr int kStudentCaptureOffset = 1 << 20;

inline bool is_driver_capture(int capture_id) {
  return capture_id < kStudentCaptureOffset;
}

/// Fingerprint of a value: seeded hash of its canonical text.
std::uint64_t fingerprint_of(const Value& v);

struct FootprintEntry {
  /// Deep snapshot; none when fingerprint_only is set.
  Value value;
  std::uint64_t step = 0;
  int capture_id = 0;
  /// Set for lists larger than ExecutionLimits::max_snapshot_elements; only
  /// `fingerprint` is retained.
  bool fingerprint_only = false;
  std::uint64_t fingerprint = 0;
};

enum class OutcomeKind { Completed, RuntimeError, StepLimitExceeded };

std::string_view to_string(OutcomeKind kind);

struct Outcome {
  OutcomeKind kind = OutcomeKind::Completed;
  /// Completed: value of the driver's last expression statement (or the
  /// called function's result).
  Value value;
  /// RuntimeError only.
  std::string message;
  SourceSpan span;
  std::string unit;
};

struct Footprint {
  std::vector<FootprintEntry> entries;
  std::uint64_t total_steps = 0;
  std::string stdout_text;
  Outcome outcome;
  /// Set when max_footprint_entries stopped further recording.
  bool truncated = false;
};

struct ExecutionLimits {
  std::uint64_t max_steps = 10'000'000;
  std::size_t max_footprint_entries = 1'000'000;
  std::size_t max_snapshot_elements = 10'000;

  /// Throws std::invalid_argument unless every limit is positive.
  void validate() const;
};

/// One line per entry: step<TAB>capture_id<TAB>canonical-value-text.
/// Fingerprint-only entries print {"t":"fingerprint","v":"<hex>"}.
std::string dump_footprint(const Footprint& footprint);

/// "completed", "runtime-error: unit:line:col: message", or
/// "step-limit-exceeded".
std::string describe_outcome(const Outcome& outcome);

}  // namespace valtrace
