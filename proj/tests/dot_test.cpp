#include <gtest/gtest.h>

#include "cellkit/dot.hpp"
#include "dot_checker.hpp"
#include "fixtures.hpp"

using namespace cellkit;
using namespace cellkit::testing;

namespace {

TEST(DotExport, SingleState) {
  auto summary = check_dot(dot_export(fix1()));
  ASSERT_TRUE(summary.has_value());
  EXPECT_EQ(summary->node_statements, 1U);
  EXPECT_EQ(summary->edges, 0U);
}

TEST(DotExport, PairHasOneAgentOneEdge) {
  std::string dot = dot_export(fix2());
  auto summary = check_dot(dot);
  ASSERT_TRUE(summary.has_value());
  EXPECT_FALSE(summary->directed);
  EXPECT_EQ(summary->node_statements, 2U);
  EXPECT_EQ(summary->edges, 1U);
  EXPECT_NE(dot.find("\"a\" -- \"b\" [label=\"1\""), std::string::npos);
}

TEST(DotExport, ColoredByClassAndEscaped) {
  KripkeModel k({"say \"hi\"", "back\\slash"}, {"x"}, {"1"}, {{true}, {false}}, {{{0, 1}}});
  Partition p = refine_fixpoint(k).final_partition();
  std::string dot = dot_export(k, &p);
  ASSERT_TRUE(check_dot(dot).has_value()) << dot;
  EXPECT_NE(dot.find("fillcolor="), std::string::npos);
}

TEST(DotChecker, RejectsBrokenInput) {
  EXPECT_FALSE(check_dot("graph {").has_value());
  EXPECT_FALSE(check_dot("graph { a -> b }").has_value());
  EXPECT_FALSE(check_dot("graph { a [label=] }").has_value());
  EXPECT_FALSE(check_dot("graph { \"a }").has_value());
  EXPECT_TRUE(check_dot("digraph g { rankdir=LR; a -> b -> c [color=red]; subgraph s { d } }").has_value());
}

TEST(DotExportProperty, GeneratedModelsAreWellFormed) {
  for (const KripkeModel& k : {gen_nbar(3), gen_email_chain(6), gen_growing_blocks(3), suite_model(5)}) {
    Partition p = refine_fixpoint(k).final_partition();
    auto plain = check_dot(dot_export(k));
    ASSERT_TRUE(plain.has_value());
    EXPECT_EQ(plain->node_statements, k.num_states());
    std::size_t pairs = 0;
    for (const auto& blocks : k.partitions())
      for (const auto& b : blocks) pairs += b.size() * (b.size() - 1) / 2;
    EXPECT_EQ(plain->edges, pairs);
    ASSERT_TRUE(check_dot(dot_export(k, &p)).has_value());
  }
}

}  // namespace
