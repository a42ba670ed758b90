#include "valtrace/plagiarism/plagiarism.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "valtrace/vm/vm.hpp"

namespace valtrace {

namespace {

FingerprintSet collect(const Footprint& footprint, const std::function<bool(int)>& is_driver) {
  FingerprintSet out;
  for (const auto& e : footprint.entries) {
    if (is_driver(e.capture_id)) continue;
    if (!e.fingerprint_only && (e.value.is_bool() || e.value.is_none())) continue;
    out.push_back(e.fingerprint);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

FingerprintSet fingerprints(const Footprint& footprint,
                            const std::unordered_set<int>& driver_capture_ids) {
  return collect(footprint, [&](int id) { return driver_capture_ids.count(id) != 0; });
}

FingerprintSet fingerprints(const Footprint& footprint) {
  return collect(footprint, is_driver_capture);
}

UnknownSubmission::UnknownSubmission(const std::string& id)
    : std::out_of_range("unknown submission '" + id + "'") {}

void CohortIndex::add(std::string id, FingerprintSet set) {
  if (std::find(ids_.begin(), ids_.end(), id) != ids_.end()) {
    throw std::invalid_argument("duplicate submission '" + id + "'");
  }
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  for (const auto fp : set) ++df_[fp];
  ids_.push_back(std::move(id));
  sets_.push_back(std::move(set));
}

std::size_t CohortIndex::position(std::string_view id) const {
  const auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) throw UnknownSubmission(std::string(id));
  return static_cast<std::size_t>(it - ids_.begin());
}

const FingerprintSet& CohortIndex::set(std::string_view id) const { return sets_[position(id)]; }

std::size_t CohortIndex::df(std::uint64_t fingerprint) const {
  const auto it = df_.find(fingerprint);
  return it == df_.end() ? 0 : it->second;
}

double CohortIndex::idf(std::uint64_t fingerprint) const {
  const std::size_t d = df(fingerprint);
  if (d == 0) return 0.0;
  return std::log(static_cast<double>(ids_.size()) / static_cast<double>(d));
}

void CohortIndex::require_cohort() const {
  if (ids_.size() < 2) throw std::invalid_argument("similarity needs at least 2 submissions");
}

std::vector<CohortIndex::Weighted> CohortIndex::weigh() const {
  std::vector<Weighted> out(sets_.size());
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    double sum = 0.0;
    for (const auto fp : sets_[i]) {
      const double w = idf(fp);
      if (w == 0.0) continue;
      out[i].terms.emplace_back(fp, w * w);
      sum += w * w;
    }
    out[i].sum = sum;
  }
  return out;
}

double CohortIndex::cosine(const Weighted& a, const Weighted& b) {
  if (a.sum == 0.0 || b.sum == 0.0) return 0.0;
  double dot = 0.0;
  auto i = a.terms.begin();
  auto j = b.terms.begin();
  while (i != a.terms.end() && j != b.terms.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      dot += i->second;
      ++i;
      ++j;
    }
  }
  return std::min(1.0, dot / std::sqrt(a.sum * b.sum));
}

double CohortIndex::similarity(std::string_view a, std::string_view b) const {
  const std::size_t i = position(a);
  const std::size_t j = position(b);
  require_cohort();
  if (i == j) return 1.0;
  const auto weighted = weigh();
  return cosine(weighted[i], weighted[j]);
}

SimilarityMatrix CohortIndex::similarity_matrix() const {
  require_cohort();
  const auto weighted = weigh();
  const auto n = static_cast<std::int64_t>(ids_.size());
  SimilarityMatrix m(ids_.size(), std::vector<double>(ids_.size(), 1.0));
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = i + 1; j < n; ++j) m[i][j] = cosine(weighted[i], weighted[j]);
  }
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < i; ++j) m[i][j] = m[j][i];
  }
  return m;
}

SimilarityMatrix CohortIndex::similarity_matrix_serial() const {
  require_cohort();
  const auto weighted = weigh();
  const std::size_t n = ids_.size();
  SimilarityMatrix m(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      m[i][j] = m[j][i] = cosine(weighted[i], weighted[j]);
    }
  }
  return m;
}

std::vector<Footprint> run_cohort(const std::vector<Submission>& submissions,
                                  const InstrumentedProgram& driver,
                                  const ExecutionLimits& limits) {
  std::vector<Footprint> out(submissions.size());
  std::vector<std::exception_ptr> errors(submissions.size());
  const auto n = static_cast<std::int64_t>(submissions.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out[i] = execute(submissions[i].program, driver, limits);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<Footprint> run_cohort_serial(const std::vector<Submission>& submissions,
                                         const InstrumentedProgram& driver,
                                         const ExecutionLimits& limits) {
  std::vector<Footprint> out;
  out.reserve(submissions.size());
  for (const auto& s : submissions) out.push_back(execute(s.program, driver, limits));
  return out;
}

CohortIndex build_index(const std::vector<Submission>& submissions,
                        const std::vector<Footprint>& footprints) {
  if (submissions.size() != footprints.size()) {
    throw std::invalid_argument("one footprint per submission is required");
  }
  CohortIndex index;
  for (std::size_t i = 0; i < submissions.size(); ++i) {
    index.add(submissions[i].id, fingerprints(footprints[i]));
  }
  return index;
}

}  // namespace valtrace
