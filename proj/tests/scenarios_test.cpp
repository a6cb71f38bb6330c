#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "cellkit/epistemic.hpp"
#include "cellkit/model_io.hpp"
#include "cellkit/scenarios.hpp"
#include "fixtures.hpp"

using namespace cellkit;
using namespace cellkit::testing;

namespace {

std::vector<std::string> names(const KripkeModel& k, const KripkeModel::Block& b) {
  std::vector<std::string> out;
  for (StateId s : b) out.push_back(k.states()[s]);
  return out;
}

TEST(GenNbar, TwoByTwo) {
  KripkeModel k = gen_nbar(2);
  ASSERT_EQ(k.num_states(), 9U);
  ASSERT_TRUE(validate(k).empty());
  const auto& diag = k.partition(2);
  ASSERT_EQ(diag.size(), 4U);
  EXPECT_EQ(names(k, diag[0]), (std::vector<std::string>{"1_1"}));
  EXPECT_EQ(names(k, diag[1]), (std::vector<std::string>{"1_2", "2_1"}));
  EXPECT_EQ(names(k, diag[2]), (std::vector<std::string>{"2_2"}));
  EXPECT_EQ(diag[3].size(), 5U);

  std::vector<std::string> with_x;
  for (StateId s = 0; s < k.num_states(); ++s)
    if (k.holds(s, 0)) with_x.push_back(k.states()[s]);
  EXPECT_EQ(with_x, (std::vector<std::string>{"1_1", "2_1"}));
}

TEST(GenNbar, RowsColumnsAndBorderAreFlagged) {
  KripkeModel k = gen_nbar(3);
  for (std::size_t b = 0; b < 4; ++b) {
    EXPECT_TRUE(k.meta(0, b).limit_infinite);
    EXPECT_TRUE(k.meta(1, b).limit_infinite);
  }
  for (std::size_t b = 0; b + 1 < k.partition(2).size(); ++b) EXPECT_FALSE(k.meta(2, b).limit_infinite);
  EXPECT_TRUE(k.meta(2, k.partition(2).size() - 1).limit_infinite);
}

TEST(GenNbar, FourByFourIsOneCell) {
  KripkeModel k = gen_nbar(4);
  EXPECT_EQ(k.num_states(), 25U);
  EXPECT_EQ(cells(k).cells.size(), 1U);
  EXPECT_EQ(closure_cells(k).size(), 1U);
  EXPECT_THROW(gen_nbar(1), ModelError);
}

TEST(GenNbarProperty, RefinementEndsDiscrete) {
  for (std::size_t n = 2; n <= 8; ++n) {
    KripkeModel k = gen_nbar(n);
    ASSERT_TRUE(validate(k).empty());
    EXPECT_TRUE(refine_fixpoint(k).final_partition().discrete()) << "n = " << n;
  }
}

TEST(GenNbarProperty, TransposeSymmetry) {
  for (std::size_t n = 2; n <= 6; ++n) {
    KripkeModel k = gen_nbar(n);
    const std::size_t side = n + 1;
    auto transpose = [side](StateId s) { return static_cast<StateId>((s % side) * side + s / side); };

    // Transposition swaps the row and column partitions and fixes the third.
    auto image = [&](const KripkeModel::BlockList& blocks) {
      std::set<std::set<StateId>> out;
      for (const auto& b : blocks) {
        std::set<StateId> t;
        for (StateId s : b) t.insert(transpose(s));
        out.insert(t);
      }
      return out;
    };
    auto as_sets = [](const KripkeModel::BlockList& blocks) {
      std::set<std::set<StateId>> out;
      for (const auto& b : blocks) out.insert(std::set<StateId>(b.begin(), b.end()));
      return out;
    };
    EXPECT_EQ(image(k.partition(0)), as_sets(k.partition(1)));
    EXPECT_EQ(image(k.partition(2)), as_sets(k.partition(2)));

    // x holds at (2,1) but not at (1,2), so the valuation is not transpose
    // invariant and R_0 is not mapped to itself. R_inf classes still map to
    // R_inf classes, and the transposed copy refines in lockstep.
    Partition final_classes = refine_fixpoint(k).final_partition();
    for (const auto& c : final_classes.classes)
      for (StateId s : c) ASSERT_EQ(final_classes.class_of[transpose(s)], final_classes.class_of[transpose(c.front())]);

    std::vector<std::vector<bool>> valuation(k.num_states());
    for (StateId s = 0; s < k.num_states(); ++s) valuation[transpose(s)] = k.valuation(s);
    KripkeModel::BlockList rows, cols, diag;
    for (const auto& b : k.partition(1)) {
      KripkeModel::Block t;
      for (StateId s : b) t.push_back(transpose(s));
      std::sort(t.begin(), t.end());
      rows.push_back(t);
    }
    for (const auto& b : k.partition(0)) {
      KripkeModel::Block t;
      for (StateId s : b) t.push_back(transpose(s));
      std::sort(t.begin(), t.end());
      cols.push_back(t);
    }
    for (const auto& b : k.partition(2)) {
      KripkeModel::Block t;
      for (StateId s : b) t.push_back(transpose(s));
      std::sort(t.begin(), t.end());
      diag.push_back(t);
    }
    KripkeModel mirrored(k.states(), k.atoms(), k.agents(), valuation, {cols, rows, diag});
    ASSERT_TRUE(validate(mirrored).empty());
    RefinementTrace a = refine_fixpoint(k), b = refine_fixpoint(mirrored);
    ASSERT_EQ(a.stabilized_at, b.stabilized_at);
    for (std::size_t r = 0; r < a.rounds.size(); ++r)
      for (StateId s = 0; s < k.num_states(); ++s)
        for (StateId t = 0; t < k.num_states(); ++t)
          ASSERT_EQ(a.rounds[r].same_class(s, t), b.rounds[r].same_class(transpose(s), transpose(t)));
  }
}

TEST(GenEmailChain, MatchesFixture) {
  KripkeModel k = gen_email_chain(3);
  EXPECT_EQ(k.states(), (std::vector<std::string>{"s0", "s1", "s2", "s3"}));
  EXPECT_EQ(k.partition(0), (KripkeModel::BlockList{{0}, {1, 2}, {3}}));
  EXPECT_EQ(k.partition(1), (KripkeModel::BlockList{{0, 1}, {2, 3}}));
  EXPECT_EQ(k.valuation(), (std::vector<std::vector<bool>>{{true}, {false}, {false}, {false}}));
  EXPECT_EQ(refine_fixpoint(k).stabilized_at, 2U);
  EXPECT_THROW(gen_email_chain(0), ModelError);
}

TEST(GenEmailChainProperty, OneCellAndLadder) {
  for (std::size_t n = 1; n <= 30; ++n) {
    KripkeModel k = gen_email_chain(n);
    ASSERT_EQ(cells(k).cells.size(), 1U);
    RefinementTrace t = refine_fixpoint(k);
    ASSERT_TRUE(t.final_partition().discrete());
    for (std::size_t r = 1; r < t.rounds.size(); ++r) ASSERT_EQ(t.rounds[r].size(), t.rounds[r - 1].size() + 1);
  }
}

TEST(GenGrowingBlocks, Three) {
  KripkeModel k = gen_growing_blocks(3);
  EXPECT_EQ(k.num_states(), 10U);
  ASSERT_TRUE(validate(k).empty());
  std::vector<std::size_t> sizes;
  for (const auto& b : k.partition(2)) sizes.push_back(b.size());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{1, 2, 3, 4}));
  EXPECT_EQ(cells(k).cells.size(), 1U);
  FanoutReport f = fanout_report(k, k.all_states());
  ASSERT_EQ(f.flagged.size(), 1U);
  EXPECT_EQ(f.flagged[0].agent, 2U);
  EXPECT_EQ(f.flagged[0].block_index, 3U);
  EXPECT_THROW(gen_growing_blocks(0), ModelError);
}

TEST(GenRandom, DeterministicAndValid) {
  EXPECT_EQ(gen_random(7, 100, 3, 2, 5), gen_random(7, 100, 3, 2, 5));
  EXPECT_NE(gen_random(7, 100, 3, 2, 5), gen_random(8, 100, 3, 2, 5));
  KripkeModel k = gen_random(7, 100, 3, 2, 5);
  EXPECT_EQ(k.num_states(), 100U);
  EXPECT_TRUE(validate(k).empty());
  for (AgentId j = 0; j < 3; ++j)
    for (const auto& b : k.partition(j)) EXPECT_LE(b.size(), 5U);
  EXPECT_THROW(gen_random(7, 0, 3, 2, 5), ModelError);
  EXPECT_THROW(gen_random(7, 10, 3, 2, 0), ModelError);
}

TEST(GeneratorsProperty, AllValid) {
  for (std::size_t m = 1; m <= 8; ++m) ASSERT_TRUE(validate(gen_growing_blocks(m)).empty());
  for (std::uint64_t seed = 0; seed < 100; ++seed) ASSERT_TRUE(validate(suite_model(seed)).empty());
}

}  // namespace
