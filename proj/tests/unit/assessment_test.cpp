#include <gtest/gtest.h>

#include <json.hpp>

#include "test_support.hpp"
#include "valtrace/assessment/assessment.hpp"

namespace valtrace {
namespace {

using testing::instrument;
using testing::read_file;

const std::string kMedian = VALTRACE_FIXTURES "/median/";

Reference median_reference(std::string name = "median") {
  return build_reference(instrument(read_file(kMedian + "reference.sl")),
                         instrument(read_file(kMedian + "driver.sl")), std::move(name));
}

AssessmentReport check_student(const std::vector<Reference>& refs, const std::string& file) {
  return check(refs, instrument(read_file(kMedian + file)), instrument(read_file(kMedian + "driver.sl")));
}

TEST(Check, LibraryCallTriggersBothFailures) {
  const auto report = check_student({median_reference()}, "library_call.sl");
  const auto& r = report.results[0];
  EXPECT_FALSE(r.satisfied);
  EXPECT_EQ(r.messages,
            (std::vector<Message>{
                {"Advice: The list was not sorted.", Severity::Error},
                {"Advice: The size of the list is not computed to determine if the number of "
                 "elements is odd or even.",
                 Severity::Error}}));
  EXPECT_DOUBLE_EQ(r.score, 0.0);
}

TEST(Check, InPlaceSortTriggersBothSuccesses) {
  const auto report = check_student({median_reference()}, "in_place_sort.sl");
  const auto& r = report.results[0];
  EXPECT_TRUE(r.satisfied);
  EXPECT_DOUBLE_EQ(r.score, 1.0);
  EXPECT_EQ(r.messages, (std::vector<Message>{{"Great: The list is sorted correctly.", Severity::Success},
                                              {"Great: The size of the list is computed.",
                                               Severity::Success}}));
  EXPECT_EQ(report.stats.outcome, "completed");
}

TEST(Check, InsertionSortOuterLoopBug) {
  const std::string dir = VALTRACE_FIXTURES "/insertion_sort/";
  const auto driver = instrument(read_file(dir + "driver.sl"));
  const auto ref = build_reference(instrument(read_file(dir + "reference.sl")), driver, "exercise-1_1");
  const auto report = check({ref}, instrument(read_file(dir + "outer_loop_bug.sl")), driver);
  const auto& msgs = report.results[0].messages;
  auto has = [&](const std::string& text, Severity sev) {
    return std::find(msgs.begin(), msgs.end(), Message{text, sev}) != msgs.end();
  };
  EXPECT_TRUE(has("Please make sure the outer loop iterates from the second element to the last.",
                  Severity::Error));
  EXPECT_TRUE(has("Great! The inner loop iterates towards left.", Severity::Success));
  EXPECT_TRUE(has("The function returns a wrong solution.", Severity::Error));
}

TEST(Check, StudentErrorsYieldPartialResults) {
  const auto report = check({median_reference()}, instrument("def find_median(S):\n    T = sorted(S)\n"
                                                             "    return T[100]\n"),
                            instrument(read_file(kMedian + "driver.sl")));
  EXPECT_EQ(report.stats.outcome.rfind("runtime-error", 0), 0u);
  EXPECT_DOUBLE_EQ(report.results[0].score, 0.5);
  EXPECT_FALSE(report.results[0].satisfied);
}

TEST(Check, SingleExecutionRegardlessOfReferenceCount) {
  const auto one = check_student({median_reference()}, "in_place_sort.sl");
  const auto three = check_student({median_reference("a"), median_reference("b"), median_reference("c")},
                                   "in_place_sort.sl");
  EXPECT_EQ(one.stats.entries, three.stats.entries);
  EXPECT_EQ(one.stats.steps, three.stats.steps);
  EXPECT_EQ(three.results.size(), 3u);
}

TEST(Assess, BestMatchAndTieBreak) {
  Footprint fp;
  FootprintEntry e;
  e.value = Value::integer(1);
  e.step = 1;
  fp.entries.push_back(e);
  Reference half{"half", {expected_value(Value::integer(1)), expected_value(Value::integer(2))}};
  Reference full{"full", {expected_value(Value::integer(1))}};
  Reference full2{"full2", {expected_value(Value::integer(1))}};
  const auto report = assess({half, full, full2}, fp);
  EXPECT_EQ(report.best, 1u);
  EXPECT_DOUBLE_EQ(report.results[0].score, 0.5);
  const std::string text = render_text(report);
  EXPECT_NE(text.find("REFERENCE: full (best match)\n"), std::string::npos);
  EXPECT_EQ(text.find("REFERENCE: half (best match)"), std::string::npos);
  EXPECT_EQ(text.find("REFERENCE: full2 (best match)"), std::string::npos);
}

TEST(Assess, AddingReferenceNeverLowersBestScore) {
  testing::Generator g(9);
  for (int i = 0; i < 200; ++i) {
    std::vector<Reference> refs{g.reference()};
    const Footprint fp = g.footprint();
    double best = assess(refs, fp).results[0].score;
    for (int k = 0; k < 3; ++k) {
      refs.push_back(g.reference());
      const auto report = assess(refs, fp);
      const double now = report.results[report.best].score;
      EXPECT_GE(now, best);
      best = now;
      for (const auto& r : report.results) {
        EXPECT_GE(r.score, 0.0);
        EXPECT_LE(r.score, 1.0);
        EXPECT_EQ(r.satisfied, r.score == 1.0);
      }
    }
  }
}

TEST(Render, SingleReferenceText) {
  Reference ref{"exercise-1_1", {expected_value(Value::integer(1), 0, 0, {}, {"Nice.", "Missing."})}};
  Footprint fp;
  FootprintEntry e;
  e.value = Value::integer(1);
  fp.entries.push_back(e);
  EXPECT_EQ(render_text(assess({ref}, fp)),
            "REFERENCE: exercise-1_1\nSATISFIED: True\nMESSAGES:\n  - SUCCESS: Nice.\n");
}

TEST(Render, JsonMirrorsReport) {
  const auto report = check_student({median_reference(), median_reference("other")}, "library_call.sl");
  const auto j = nlohmann::json::parse(render_json(report));
  ASSERT_EQ(j["results"].size(), 2u);
  EXPECT_EQ(j["results"][0]["reference"], "median");
  EXPECT_EQ(j["results"][0]["satisfied"], false);
  EXPECT_EQ(j["results"][0]["score"], 0.0);
  EXPECT_EQ(j["results"][0]["messages"][0]["severity"], "error");
  EXPECT_EQ(j["results"][0]["messages"][0]["text"], "Advice: The list was not sorted.");
  EXPECT_EQ(j["best"], 0);
  EXPECT_EQ(j["stats"]["entries"], report.stats.entries);
  EXPECT_EQ(j["stats"]["steps"], report.stats.steps);
  EXPECT_EQ(j["stats"]["outcome"], "completed");
}

TEST(Render, EmptyMessagesEncodeAsArray) {
  Reference ref{"r", {expected_value(Value::integer(5))}};
  const auto j = nlohmann::json::parse(render_json(assess({ref}, Footprint{})));
  EXPECT_TRUE(j["results"][0]["messages"].is_array());
  EXPECT_TRUE(j["results"][0]["messages"].empty());
}

TEST(Render, JsonAndTextAgreeOnRandomReports) {
  testing::Generator g(21);
  for (int i = 0; i < 50; ++i) {
    std::vector<Reference> refs;
    for (std::size_t k = 0, n = 1 + g.below(3); k < n; ++k) refs.push_back(g.reference());
    const auto report = assess(refs, g.footprint());
    const auto j = nlohmann::json::parse(render_json(report));
    const std::string text = render_text(report);
    std::size_t pos = 0;
    for (std::size_t k = 0; k < refs.size(); ++k) {
      pos = text.find("SATISFIED: ", pos);
      ASSERT_NE(pos, std::string::npos);
      const bool t = text.compare(pos + 11, 4, "True") == 0;
      EXPECT_EQ(j["results"][k]["satisfied"].get<bool>(), t);
      ++pos;
    }
  }
}

}  // namespace
}  // namespace valtrace
