#include "valtrace/assessment/assessment.hpp"

#include <stdexcept>

#include "valtrace/support/json_text.hpp"
#include "valtrace/vm/vm.hpp"

namespace valtrace {

ReferenceResult evaluate(const Reference& reference, const Footprint& footprint) {
  ReferenceResult r;
  r.reference_name = reference.name;
  std::size_t ok = 0;
  for (const auto& a : reference.annotations) {
    Satisfaction s = satisfied(*a, footprint);
    if (s.satisfied) ++ok;
    append_unique(r.messages, s.messages);
    r.per_annotation.push_back(std::move(s));
  }
  const std::size_t n = reference.annotations.size();
  r.satisfied = ok == n;
  r.score = n == 0 ? 0.0 : static_cast<double>(ok) / static_cast<double>(n);
  return r;
}

AssessmentReport assess(const std::vector<Reference>& references, const Footprint& footprint) {
  if (references.empty()) throw std::invalid_argument("at least one reference is required");
  AssessmentReport report;
  for (const auto& ref : references) {
    report.results.push_back(evaluate(ref, footprint));
    if (report.results.back().score > report.results[report.best].score) {
      report.best = report.results.size() - 1;
    }
  }
  report.stats.entries = footprint.entries.size();
  report.stats.steps = footprint.total_steps;
  report.stats.outcome = describe_outcome(footprint.outcome);
  return report;
}

AssessmentReport check(const std::vector<Reference>& references,
                       const InstrumentedProgram& student,
                       const InstrumentedProgram& driver, const ExecutionLimits& limits) {
  if (references.empty()) throw std::invalid_argument("at least one reference is required");
  return assess(references, execute(student, driver, limits));
}

std::string render_text(const AssessmentReport& report) {
  std::string out;
  for (std::size_t i = 0; i < report.results.size(); ++i) {
    const auto& r = report.results[i];
    if (i > 0) out += '\n';
    out += "REFERENCE: " + r.reference_name;
    if (report.results.size() > 1 && i == report.best) out += " (best match)";
    out += '\n';
    out += r.satisfied ? "SATISFIED: True\n" : "SATISFIED: False\n";
    out += "MESSAGES:\n";
    for (const auto& m : r.messages) {
      out += m.severity == Severity::Success ? "  - SUCCESS: " : "  - ERROR: ";
      out += m.text;
      out += '\n';
    }
  }
  return out;
}

std::string render_json(const AssessmentReport& report) {
  std::string out = "{\"results\":[";
  for (std::size_t i = 0; i < report.results.size(); ++i) {
    const auto& r = report.results[i];
    if (i > 0) out += ',';
    out += "{\"reference\":";
    json_text::append_string(out, r.reference_name);
    out += r.satisfied ? ",\"satisfied\":true" : ",\"satisfied\":false";
    out += ",\"score\":" + json_text::number(r.score);
    out += ",\"messages\":[";
    for (std::size_t j = 0; j < r.messages.size(); ++j) {
      if (j > 0) out += ',';
      out += "{\"severity\":\"";
      out += to_string(r.messages[j].severity);
      out += "\",\"text\":";
      json_text::append_string(out, r.messages[j].text);
      out += '}';
    }
    out += "]}";
  }
  out += "],\"best\":" + std::to_string(report.best);
  out += ",\"stats\":{\"entries\":" + std::to_string(report.stats.entries);
  out += ",\"steps\":" + std::to_string(report.stats.steps);
  out += ",\"outcome\":";
  json_text::append_string(out, report.stats.outcome);
  out += "}}\n";
  return out;
}

}  // namespace valtrace
