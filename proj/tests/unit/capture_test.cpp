#include <gtest/gtest.h>

#include <functional>

#include "test_support.hpp"
#include "valtrace/frontend/parser.hpp"
#include "valtrace/frontend/printer.hpp"
#include "valtrace/vm/vm.hpp"

namespace valtrace {
namespace {

using testing::instrument;
using testing::run_source;
using testing::value_of;

struct Observed {
  int id;
  NodeKind inner;
};

std::vector<Observed> observes(const AstNode& root) {
  std::vector<Observed> out;
  std::function<void(const AstNode&)> walk = [&](const AstNode& n) {
    if (n.kind == NodeKind::Observe) out.push_back({n.capture_id, n.child(0).kind});
    for (const auto& c : n.children) walk(c);
  };
  walk(root);
  return out;
}

TEST(Rewrite, AssignmentOfCall) {
  const auto ip = instrument("x = len(s)\n");
  ASSERT_EQ(ip.capture_points.size(), 2u);
  EXPECT_EQ(ip.capture_points[0].kind, CaptureKind::Assignment);
  EXPECT_EQ(ip.capture_points[1].kind, CaptureKind::Subexpression);
  const auto obs = observes(ip.program);
  ASSERT_EQ(obs.size(), 2u);
  EXPECT_EQ(obs[0].inner, NodeKind::Identifier);
  EXPECT_EQ(obs[1].inner, NodeKind::Call);
}

TEST(Rewrite, ReturnOfIndexedSortedCapturesUnnamedList) {
  const auto ip = instrument("def f(S, m):\n    return sorted(S)[m]\n");
  std::vector<NodeKind> inner;
  for (const auto& o : observes(ip.program)) inner.push_back(o.inner);
  EXPECT_NE(std::find(inner.begin(), inner.end(), NodeKind::Call), inner.end());
  EXPECT_NE(std::find(inner.begin(), inner.end(), NodeKind::Index), inner.end());
  const auto ret = std::find_if(ip.capture_points.begin(), ip.capture_points.end(),
                                [](const CapturePoint& c) { return c.kind == CaptureKind::ReturnValue; });
  EXPECT_NE(ret, ip.capture_points.end());

  const Footprint fp = run_source("def f(S, m):\n    return sorted(S)[m]\n", "f([3, 1, 2], 0)\n");
  EXPECT_TRUE(testing::footprint_contains(fp, value_of("[1, 2, 3]"), true));
}

TEST(Rewrite, MutatorCapturesReceiverAfterCall) {
  const Footprint fp = run_source("def f(t):\n    t.sort()\n    return 0\n", "f([3, 1, 2])\n");
  EXPECT_TRUE(testing::footprint_contains(fp, value_of("[1, 2, 3]"), true));
  // The argument capture sees the list before the call, the receiver capture after it.
  const auto at = [&](const char* lit) {
    const Value v = value_of(lit);
    const auto it = std::find_if(fp.entries.begin(), fp.entries.end(),
                                 [&](const FootprintEntry& e) { return identical(e.value, v); });
    return it == fp.entries.end() ? ~0ULL : static_cast<unsigned long long>(it->step);
  };
  EXPECT_LT(at("[3, 1, 2]"), at("[1, 2, 3]"));
}

TEST(Rewrite, LiteralsAndIdentifiersNotWrapped) {
  const auto ip = instrument("print(1, x, \"s\")\n");
  const auto obs = observes(ip.program);
  ASSERT_EQ(obs.size(), 1u);
  EXPECT_EQ(obs[0].inner, NodeKind::Call);
}

TEST(Rewrite, ConditionsAndLoopElementsCaptured) {
  const auto ip = instrument("for v in xs:\n    if v > 1:\n        pass\n");
  ASSERT_EQ(ip.capture_points.size(), 2u);
  EXPECT_EQ(ip.capture_points[0].kind, CaptureKind::LoopElement);
  EXPECT_EQ(ip.capture_points[1].kind, CaptureKind::Subexpression);
}

TEST(Rewrite, ParametersCapturedAsArguments) {
  const auto ip = instrument("def f(a, b):\n    return a\n");
  ASSERT_EQ(ip.capture_points.size(), 3u);
  EXPECT_EQ(ip.capture_points[0].kind, CaptureKind::Argument);
  EXPECT_EQ(ip.capture_points[1].kind, CaptureKind::Argument);
  EXPECT_EQ(ip.capture_points[2].kind, CaptureKind::ReturnValue);
}

TEST(Rewrite, IdsDenseInPreOrderAndOriginsPointAtSource) {
  const std::string src = "def f(x):\n    y = x * 2 + 1\n    return [y, y - 1]\n";
  const auto ip = instrument(src);
  const auto obs = observes(ip.program);
  ASSERT_EQ(obs.size(), ip.capture_points.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    EXPECT_EQ(obs[i].id, static_cast<int>(i));
    EXPECT_EQ(ip.capture_points[i].id, static_cast<int>(i));
    EXPECT_GE(ip.capture_points[i].origin.line, 1);
    EXPECT_LE(ip.capture_points[i].origin.line, 3);
  }
}

TEST(Rewrite, CaptureCompletenessOneObservePerValueNode) {
  const Program p = parse_source(
      "def f(xs):\n    out = [v * v for v in xs if v != 2]\n    out.append(len(xs) - 1)\n"
      "    return out[1:] + [xs[0]]\n");
  std::size_t value_nodes = 0;
  std::function<void(const AstNode&)> walk = [&](const AstNode& n) {
    if (is_expression(n.kind) && n.kind != NodeKind::Identifier && n.kind != NodeKind::Literal) {
      ++value_nodes;
    }
    const bool call = n.kind == NodeKind::Call;
    for (std::size_t i = call ? 1 : 0; i < n.children.size(); ++i) walk(n.children[i]);
  };
  walk(p);
  const auto ip = rewrite(p);
  std::size_t subexpr = 0;
  for (const auto& c : ip.capture_points) {
    if (c.kind == CaptureKind::Subexpression) ++subexpr;
  }
  EXPECT_EQ(subexpr, value_nodes);
}

TEST(Rewrite, StripInvertsRewrite) {
  const std::string src = testing::read_file(VALTRACE_FIXTURES "/median/in_place_sort.sl");
  const Program p = parse_source(src);
  EXPECT_TRUE(structurally_equal(strip(rewrite(p)), p));
  EXPECT_TRUE(structurally_equal(strip(without_captures(p)), p));
  EXPECT_TRUE(structurally_equal(strip_observers(p), p));
}

TEST(Rewrite, Deterministic) {
  const Program p = parse_source("x = [a + b for a in r]\nprint(x[0])\n");
  const auto a = rewrite(p);
  const auto b = rewrite(p);
  ASSERT_EQ(a.capture_points.size(), b.capture_points.size());
  for (std::size_t i = 0; i < a.capture_points.size(); ++i) {
    EXPECT_EQ(a.capture_points[i].origin, b.capture_points[i].origin);
    EXPECT_EQ(a.capture_points[i].kind, b.capture_points[i].kind);
  }
  EXPECT_TRUE(structurally_equal(a.program, b.program));
}

TEST(Rewrite, MutatorNames) {
  EXPECT_TRUE(is_mutator_method("sort"));
  EXPECT_TRUE(is_mutator_method("append"));
  EXPECT_FALSE(is_mutator_method("lower"));
}

TEST(Rewrite, CorpusPreservesSemantics) {
  const auto r = testing::check_rewrite_preservation(VALTRACE_CORPUS);
  EXPECT_EQ(r.cases, 90u);
  for (const auto& f : r.failures) ADD_FAILURE() << f;
}

}  // namespace
}  // namespace valtrace
