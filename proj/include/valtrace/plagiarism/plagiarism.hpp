#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "valtrace/capture/rewrite.hpp"
#include "valtrace/vm/footprint.hpp"

namespace valtrace {

/// Sorted, duplicate-free fingerprints.
using FingerprintSet = std::vector<std::uint64_t>;

/// Distinct fingerprints of every entry outside `driver_capture_ids`, skipping
/// bool and none values.
FingerprintSet fingerprints(const Footprint& footprint,
                            const std::unordered_set<int>& driver_capture_ids);

/// Same, treating every unshifted capture id as a driver capture.
FingerprintSet fingerprints(const Footprint& footprint);

class UnknownSubmission : public std::out_of_range {
 public:
  explicit UnknownSubmission(const std::string& id);
};

using SimilarityMatrix = std::vector<std::vector<double>>;

/// Document frequencies over a cohort of fingerprint sets, with binary term
/// frequency and idf(v) = ln(n / df(v)).
class CohortIndex {
 public:
  /// Throws std::invalid_argument for a duplicate id.
  void add(std::string id, FingerprintSet set);

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const FingerprintSet& set(std::string_view id) const;
  std::size_t df(std::uint64_t fingerprint) const;
  double idf(std::uint64_t fingerprint) const;

  /// Cosine over idf-weighted presence vectors; 0 when either side has no
  /// weight. Throws UnknownSubmission, or std::invalid_argument when the
  /// cohort has fewer than 2 submissions.
  double similarity(std::string_view a, std::string_view b) const;

  /// Row order follows insertion order; diagonal is 1. Rows are computed in
  /// parallel.
  SimilarityMatrix similarity_matrix() const;

  /// Single-threaded reference implementation of similarity_matrix().
  SimilarityMatrix similarity_matrix_serial() const;

 private:
  struct Weighted {
    // (fingerprint, idf^2) sorted by fingerprint.
    std::vector<std::pair<std::uint64_t, double>> terms;
    // Sum of idf^2, accumulated in fingerprint order like the dot product.
    double sum = 0.0;
  };

  std::size_t position(std::string_view id) const;
  void require_cohort() const;
  std::vector<Weighted> weigh() const;
  static double cosine(const Weighted& a, const Weighted& b);

  std::vector<std::string> ids_;
  std::vector<FingerprintSet> sets_;
  std::unordered_map<std::uint64_t, std::size_t> df_;
};

struct Submission {
  std::string id;
  InstrumentedProgram program;
};

/// Executes every submission with the shared driver, one VM per
/// submission, in parallel. Output order matches input order.
std::vector<Footprint> run_cohort(const std::vector<Submission>& submissions,
                                  const InstrumentedProgram& driver,
                                  const ExecutionLimits& limits = {});

/// Single-threaded reference implementation of run_cohort().
std::vector<Footprint> run_cohort_serial(const std::vector<Submission>& submissions,
                                         const InstrumentedProgram& driver,
                                         const ExecutionLimits& limits = {});

CohortIndex build_index(const std::vector<Submission>& submissions,
                        const std::vector<Footprint>& footprints);

}  // namespace valtrace
