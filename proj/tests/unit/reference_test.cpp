#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "valtrace/annotations/invariants.hpp"
#include "valtrace/reference/reference.hpp"
#include "valtrace/support/hash.hpp"
#include "valtrace/vm/vm.hpp"

namespace valtrace {
namespace {

using testing::instrument;
using testing::read_file;
using testing::value_of;

Reference build(std::string_view instructor, std::string_view driver) {
  return build_reference(instrument(instructor), instrument(driver), "ref");
}

Reference median_reference() {
  const std::string dir = VALTRACE_FIXTURES "/median/";
  return build(read_file(dir + "reference.sl"), read_file(dir + "driver.sl"));
}

TEST(Build, MedianReferenceHasTwoExpectedValues) {
  const Reference r = median_reference();
  ASSERT_EQ(r.annotations.size(), 2u);
  EXPECT_EQ(r.annotations[0]->kind, AnnotationKind::ExpectedValue);
  EXPECT_EQ(display(r.annotations[0]->expected), "[-1.0, 2.25, 3.0, 5.0, 5.0, 8.0]");
  EXPECT_EQ(r.annotations[0]->success_message, "Great: The list is sorted correctly.");
  EXPECT_TRUE(identical(r.annotations[1]->expected, Value::integer(6)));
  EXPECT_EQ(r.annotations[1]->success_message, "Great: The size of the list is computed.");
  EXPECT_EQ(r.format_version, kReferenceFormatVersion);
  EXPECT_EQ(r.source_hash, source_hash(instrument(read_file(VALTRACE_FIXTURES
                                                            "/median/reference.sl"))
                                           .original));
}

TEST(Build, NotDemotesChild) {
  const std::string dir = VALTRACE_FIXTURES "/max/";
  const Reference r = build(read_file(dir + "reference.sl"), read_file(dir + "driver.sl"));
  ASSERT_EQ(r.annotations.size(), 1u);
  EXPECT_EQ(r.annotations[0]->kind, AnnotationKind::Not);
  ASSERT_EQ(r.annotations[0]->children.size(), 1u);
  EXPECT_EQ(r.annotations[0]->children[0]->kind, AnnotationKind::ExpectedValue);
  EXPECT_EQ(display(r.annotations[0]->children[0]->expected), "[-2, 3, 4, 7, 9]");
}

TEST(Build, NoAnnotationsRejected) {
  try {
    build("def f(x):\n    return x\n", "f(1)\n");
    FAIL();
  } catch (const ReferenceBuildError& e) {
    EXPECT_STREQ(e.what(), "reference registers no annotations");
  }
}

TEST(Build, InstructorRuntimeErrorRejected) {
  EXPECT_THROW(build("expect(1)\nx = 1 // 0\n", "0\n"), ReferenceBuildError);
}

TEST(Build, AliasingRejected) {
  EXPECT_THROW(build("a = expect(1)\nnot_(a)\nnot_(a)\n", "0\n"), AliasError);
}

TEST(Build, UnknownInvariantRejected) {
  EXPECT_THROW(build("expect_inv(\"x\", \"nope\")\n", "0\n"), UnknownInvariantError);
}

TEST(Build, ConstructorsAndMessages) {
  const Reference r = build(
      "a = expect([1, 2])\n"
      "b = expect_tol(1.0, 0.1, 0, \"near\", none)\n"
      "c = expect_inv(\"Hi\", [\"string_capitalization\"])\n"
      "before(a, b)\n"
      "any_([c, expect(3), expect(4)], none, \"none of them\")\n"
      "unordered_collection([expect(5)])\n"
      "limit_steps(100, \"fast\", \"slow\")\n",
      "0\n");
  ASSERT_EQ(r.annotations.size(), 4u);
  EXPECT_EQ(r.annotations[0]->kind, AnnotationKind::Before);
  EXPECT_EQ(r.annotations[0]->children[1]->success_message, "near");
  EXPECT_DOUBLE_EQ(r.annotations[0]->children[1]->atol, 0.1);
  const auto& any = *r.annotations[1];
  EXPECT_EQ(any.kind, AnnotationKind::Or);
  EXPECT_EQ(any.failure_message, "none of them");
  EXPECT_FALSE(any.success_message.has_value());
  ASSERT_EQ(any.children.size(), 2u);
  EXPECT_EQ(any.children[0]->kind, AnnotationKind::Or);
  EXPECT_EQ(any.children[0]->children[0]->invariants,
            (std::vector<std::string>{std::string(kStringCapitalization)}));
  EXPECT_EQ(r.annotations[2]->kind, AnnotationKind::Collection);
  EXPECT_FALSE(r.annotations[2]->ordered);
  EXPECT_EQ(r.annotations[3]->budget, 100);
}

TEST(Build, ExpectedValuesAreSnapshots) {
  const Reference r = build("xs = [1]\nexpect(xs)\nxs.append(2)\n", "0\n");
  EXPECT_EQ(display(r.annotations[0]->expected), "[1]");
}

TEST(Build, ConstructorArgumentErrors) {
  EXPECT_THROW(build("all_([expect(1)])\n", "0\n"), ReferenceBuildError);
  EXPECT_THROW(build("ordered_collection([])\n", "0\n"), ReferenceBuildError);
  EXPECT_THROW(build("limit_steps(-1)\n", "0\n"), ReferenceBuildError);
  EXPECT_THROW(build("expect_tol(1, -1, 0)\n", "0\n"), ReferenceBuildError);
  EXPECT_THROW(build("not_(1)\n", "0\n"), ReferenceBuildError);
  EXPECT_THROW(build("expect(1, 2)\n", "0\n"), ReferenceBuildError);
}

TEST(Build, StudentsCannotUseConstructors) {
  const Footprint fp = testing::run_source("expect(1)\n", "0\n");
  EXPECT_EQ(fp.outcome.kind, OutcomeKind::RuntimeError);
}

TEST(Serialize, MedianReferenceBytes) {
  const std::string bytes = serialize(median_reference());
  EXPECT_EQ(bytes.rfind("{\"format_version\":1,\"name\":\"ref\",\"source_hash\":\"", 0), 0u);
  std::size_t count = 0;
  for (std::size_t pos = 0; (pos = bytes.find("\"kind\":\"expected-value\"", pos)) != std::string::npos;
       ++pos) {
    ++count;
  }
  EXPECT_EQ(count, 2u);
  EXPECT_NE(bytes.find(R"("expected":{"t":"int","v":6})"), std::string::npos);
  EXPECT_EQ(bytes.back(), '\n');
}

TEST(Serialize, DeterministicAcrossBuilds) {
  EXPECT_EQ(serialize(median_reference()), serialize(median_reference()));
}

TEST(Serialize, RoundTripFixpoint) {
  const std::string bytes = serialize(median_reference());
  EXPECT_EQ(serialize(deserialize(bytes)), bytes);
}

TEST(Serialize, NestedTreeShapePreserved) {
  Reference r;
  r.name = "nested";
  r.annotations.push_back(before(and_(expected_value(Value::integer(1)), step_budget(10)),
                                 not_(expected_value(Value::real(-0.0), 0, 0, {}, {"a", "b"})),
                                 {"s", std::nullopt}));
  const Reference back = deserialize(serialize(r));
  ASSERT_EQ(back.annotations.size(), 1u);
  EXPECT_TRUE(annotations_equal(*r.annotations[0], *back.annotations[0]));
  EXPECT_EQ(back.annotations[0]->children[0]->kind, AnnotationKind::And);
  EXPECT_EQ(back.annotations[0]->children[1]->kind, AnnotationKind::Not);
}

TEST(Serialize, NonFiniteFloats) {
  Reference r;
  r.name = "nf";
  r.annotations.push_back(expected_value(Value::list({Value::real(INFINITY), Value::real(-INFINITY)})));
  r.annotations.push_back(expected_value(Value::real(NAN)));
  const std::string bytes = serialize(r);
  EXPECT_NE(bytes.find(R"({"t":"float","v":"inf"})"), std::string::npos);
  EXPECT_EQ(serialize(deserialize(bytes)), bytes);
}

TEST(Deserialize, Errors) {
  const std::string bytes = serialize(median_reference());
  EXPECT_THROW(deserialize(bytes.substr(0, bytes.size() / 2)), FormatError);
  EXPECT_THROW(deserialize(""), FormatError);
  EXPECT_THROW(deserialize("[]"), FormatError);
  std::string v99 = bytes;
  v99.replace(v99.find("\"format_version\":1"), 18, "\"format_version\":99");
  try {
    deserialize(v99);
    FAIL();
  } catch (const VersionError& e) {
    EXPECT_EQ(e.version(), 99);
  }
  EXPECT_THROW(deserialize(R"({"format_version":1,"name":"x","source_hash":"00","annotations":[]})"),
               FormatError);
  EXPECT_THROW(deserialize(R"({"format_version":1,"name":"x","source_hash":"0000000000000000",)"
                           R"("annotations":[{"id":0,"kind":"not","children":[0]}]})"),
               FormatError);
  EXPECT_THROW(deserialize(R"({"format_version":1,"name":"x","source_hash":"0000000000000000",)"
                           R"("annotations":[{"id":0,"kind":"expected-value","expected":)"
                           R"({"t":"int","v":1},"atol":0,"rtol":0,"invariants":["nope"]}]})"),
               UnknownInvariantError);
}

TEST(Deserialize, TruncationOffsetPointsIntoInput) {
  const std::string bytes = serialize(median_reference());
  try {
    deserialize(bytes.substr(0, 40));
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_LE(e.offset(), 41u);
    EXPECT_GT(e.offset(), 0u);
  }
}

TEST(Properties, SerializationRoundTrip) {
  const auto r = testing::check_serialization(5, 60, 40);
  EXPECT_TRUE(r.ok());
  for (const auto& f : r.failures) ADD_FAILURE() << f;
}

TEST(Hash, SeededAndStable) {
  EXPECT_EQ(hash64("abc"), hash64("abc"));
  EXPECT_NE(hash64("abc"), hash64("abd"));
  EXPECT_NE(hash64("abc", 1), hash64("abc", 2));
  EXPECT_EQ(to_hex64(0xabcULL), "0000000000000abc");
}

}  // namespace
}  // namespace valtrace
