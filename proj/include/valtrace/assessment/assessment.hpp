#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "valtrace/annotations/satisfaction.hpp"
#include "valtrace/reference/reference.hpp"
#include "valtrace/vm/footprint.hpp"

namespace valtrace {

struct ReferenceResult {
  std::string reference_name;
  bool satisfied = false;
  std::vector<Satisfaction> per_annotation;
  /// Deduplicated, in annotation creation order.
  std::vector<Message> messages;
  /// satisfied top-level annotations / top-level annotations.
  double score = 0.0;
};

struct FootprintStats {
  std::size_t entries = 0;
  std::uint64_t steps = 0;
  /// describe_outcome() text.
  std::string outcome;
};

struct AssessmentReport {
  std::vector<ReferenceResult> results;
  /// Highest score; ties go to the lowest index.
  std::size_t best = 0;
  FootprintStats stats;
};

ReferenceResult evaluate(const Reference& reference, const Footprint& footprint);

/// Evaluates one footprint against every reference. Throws
/// std::invalid_argument for an empty reference list.
AssessmentReport assess(const std::vector<Reference>& references,
                        const Footprint& footprint);

/// Runs the student once and assesses the footprint.
AssessmentReport check(const std::vector<Reference>& references,
                       const InstrumentedProgram& student,
                       const InstrumentedProgram& driver,
                       const ExecutionLimits& limits = {});

std::string render_text(const AssessmentReport& report);
std::string render_json(const AssessmentReport& report);

}  // namespace valtrace
