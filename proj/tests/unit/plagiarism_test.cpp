#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "valtrace/frontend/parser.hpp"
#include "valtrace/plagiarism/plagiarism.hpp"
#include "valtrace/support/hash.hpp"
#include "valtrace/vm/vm.hpp"

namespace valtrace {
namespace {

using testing::instrument;
using testing::read_file;
using testing::value_of;

Footprint with_values(std::initializer_list<const char*> literals, int capture = kStudentCaptureOffset) {
  Footprint fp;
  for (const char* l : literals) {
    FootprintEntry e;
    e.value = value_of(l);
    e.capture_id = capture;
    fp.entries.push_back(e);
  }
  return fp;
}

std::vector<Submission> cohort_submissions() {
  std::vector<Submission> subs;
  for (const auto& path : testing::corpus_files(VALTRACE_FIXTURES "/cohort/submissions")) {
    subs.push_back({path.stem().string(), instrument(read_file(path))});
  }
  return subs;
}

TEST(Fingerprints, ExcludesBoolAndNone) {
  EXPECT_TRUE(fingerprints(with_values({"true", "none"})).empty());
}

TEST(Fingerprints, SetSemantics) {
  EXPECT_EQ(fingerprints(with_values({"[1, 2]", "[1, 2]", "[1, 2]", "[1, 2]", "[1, 2]"})).size(), 1u);
}

TEST(Fingerprints, DriverCapturesExcluded) {
  EXPECT_TRUE(fingerprints(with_values({"5", "[1]"}, 3)).empty());
  EXPECT_TRUE(fingerprints(with_values({"5"}, 7), {7}).empty());
  EXPECT_EQ(fingerprints(with_values({"5"}, 7), {}).size(), 1u);
}

TEST(Fingerprints, MedianRunContainsSortedList) {
  const std::string dir = VALTRACE_FIXTURES "/median/";
  const Footprint fp = testing::run_source(read_file(dir + "in_place_sort.sl"), read_file(dir + "driver.sl"));
  const auto set = fingerprints(fp);
  // Oracle: hash of the canonical text, computed independently.
  const std::uint64_t want = hash64(
      R"({"t":"list","v":[{"t":"float","v":-1},{"t":"float","v":2.25},{"t":"float","v":3},)"
      R"({"t":"float","v":5},{"t":"float","v":5},{"t":"float","v":8}]})");
  EXPECT_TRUE(std::binary_search(set.begin(), set.end(), want));
}

TEST(Fingerprints, RenameInvariance) {
  const char* a = "def f(xs):\n    total = 0\n    for v in xs:\n        total += v * v\n    return total\n";
  const char* b = "def f(q):\n    acc = 0\n    for item in q:\n        acc += item * item\n    return acc\n";
  const Footprint fa = testing::run_source(a, "f([1, 2, 3])\n");
  const Footprint fb = testing::run_source(b, "f([1, 2, 3])\n");
  EXPECT_EQ(fingerprints(fa), fingerprints(fb));
}

TEST(Index, SimilarityBasics) {
  CohortIndex idx;
  idx.add("a", {1, 2, 3});
  idx.add("b", {1, 2, 3});
  idx.add("c", {3, 4});
  idx.add("d", {5});
  EXPECT_THROW(idx.add("a", {}), std::invalid_argument);
  EXPECT_DOUBLE_EQ(idx.similarity("a", "b"), 1.0);
  EXPECT_DOUBLE_EQ(idx.similarity("a", "d"), 0.0);
  EXPECT_EQ(idx.df(3), 3u);
  EXPECT_EQ(idx.df(99), 0u);
  EXPECT_DOUBLE_EQ(idx.idf(5), std::log(4.0));
  EXPECT_THROW(idx.similarity("a", "zz"), UnknownSubmission);
  EXPECT_EQ(idx.similarity("a", "c"), idx.similarity("c", "a"));
  // Brute-force cosine for a vs c: shared {3}, weights ln(4/df)^2.
  const double w1 = std::pow(std::log(4.0 / 2), 2), w3 = std::pow(std::log(4.0 / 3), 2),
               w4 = std::pow(std::log(4.0), 2);
  EXPECT_NEAR(idx.similarity("a", "c"), w3 / (std::sqrt(2 * w1 + w3) * std::sqrt(w3 + w4)), 1e-15);
}

TEST(Index, UniversalValuesWeighNothing) {
  CohortIndex idx;
  idx.add("x", {7, 1});
  idx.add("y", {7, 2});
  idx.add("z", {7});
  EXPECT_DOUBLE_EQ(idx.idf(7), 0.0);
  EXPECT_DOUBLE_EQ(idx.similarity("x", "y"), 0.0);
  EXPECT_DOUBLE_EQ(idx.similarity("x", "z"), 0.0);
}

TEST(Index, TwoIdenticalSubmissionsAreAllUniversal) {
  CohortIndex idx;
  idx.add("p", {1, 2});
  idx.add("q", {1, 2});
  EXPECT_DOUBLE_EQ(idx.similarity("p", "q"), 0.0);
  const auto m = idx.similarity_matrix();
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0][1], m[1][0]);
  EXPECT_DOUBLE_EQ(m[0][0], 1.0);
}

TEST(Index, SingleSubmissionRejected) {
  CohortIndex idx;
  idx.add("only", {1});
  EXPECT_THROW(idx.similarity_matrix(), std::invalid_argument);
}

TEST(Index, MatrixMatchesPairwiseAndSerial) {
  testing::Generator g(17);
  CohortIndex idx;
  for (int i = 0; i < 12; ++i) {
    FingerprintSet s;
    for (std::size_t k = 0, n = g.below(20); k < n; ++k) s.push_back(g.below(30));
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    idx.add("s" + std::to_string(i), s);
  }
  const auto par = idx.similarity_matrix();
  const auto ser = idx.similarity_matrix_serial();
  EXPECT_EQ(par, ser);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    EXPECT_EQ(par[i][i], 1.0);
    for (std::size_t j = 0; j < idx.size(); ++j) {
      EXPECT_EQ(par[i][j], par[j][i]);
      if (i != j) EXPECT_EQ(par[i][j], idx.similarity(idx.ids()[i], idx.ids()[j]));
      EXPECT_GE(par[i][j], 0.0);
      EXPECT_LE(par[i][j], 1.0);
    }
  }
}

TEST(Cohort, ParallelRunMatchesSerial) {
  const auto subs = cohort_submissions();
  const auto driver = instrument(read_file(VALTRACE_FIXTURES "/cohort/driver.sl"));
  const auto par = run_cohort(subs, driver);
  const auto ser = run_cohort_serial(subs, driver);
  ASSERT_EQ(par.size(), ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    EXPECT_EQ(dump_footprint(par[i]), dump_footprint(ser[i])) << subs[i].id;
    EXPECT_EQ(par[i].total_steps, ser[i].total_steps);
  }
}

TEST(Cohort, ClonePairDominates) {
  const auto subs = cohort_submissions();
  const auto driver = instrument(read_file(VALTRACE_FIXTURES "/cohort/driver.sl"));
  const auto idx = build_index(subs, run_cohort(subs, driver));
  const double clone = idx.similarity("bubble_original", "bubble_renamed");
  EXPECT_GT(clone, 0.9);
  for (const auto& a : idx.ids()) {
    for (const auto& b : idx.ids()) {
      if (a >= b) continue;
      const bool pair = (a == "bubble_original" && b == "bubble_renamed");
      if (!pair) {
        EXPECT_LT(idx.similarity(a, b), clone) << a << " " << b;
        EXPECT_LT(idx.similarity(a, b), 0.5) << a << " " << b;
      }
    }
  }
}

TEST(Cohort, DeadCodeOnlyLowersSimilarity) {
  auto subs = cohort_submissions();
  const auto driver = instrument(read_file(VALTRACE_FIXTURES "/cohort/driver.sl"));
  const double clone = build_index(subs, run_cohort(subs, driver)).similarity("bubble_original", "bubble_renamed");
  auto& renamed = subs[1];
  ASSERT_EQ(renamed.id, "bubble_renamed");
  std::string src = read_file(VALTRACE_FIXTURES "/cohort/submissions/bubble_renamed.sl");
  src += "\njunk = [\"unique to this copy\", 123456789]\nnoise = 98765 * 3\n";
  renamed.program = instrument(src);
  const double padded = build_index(subs, run_cohort(subs, driver)).similarity("bubble_original", "bubble_renamed");
  EXPECT_LE(padded, clone);
}

}  // namespace
}  // namespace valtrace
