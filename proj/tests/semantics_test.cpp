#include <gtest/gtest.h>

#include "cellkit/semantics.hpp"
#include "fixtures.hpp"

using namespace cellkit;
using namespace cellkit::testing;

namespace {

std::vector<StateId> ext(const KripkeModel& k, const char* text) { return extension(k, parse_formula(text)).members(); }

TEST(Extension, SingletonBlockKnows) { EXPECT_EQ(ext(fix1(), "K1 x"), std::vector<StateId>{0}); }

TEST(Extension, Fix2KnowledgeFails) {
  EXPECT_TRUE(ext(fix2(), "K1 x").empty());
  EXPECT_TRUE(naive_extension(fix2(), parse_formula("K1 x")).empty());
}

TEST(Extension, ChainPossibility) {
  std::vector<StateId> expected{0, 1};
  EXPECT_EQ(naive_extension(fix4(2), parse_formula("~K2 ~x")), expected);
  EXPECT_EQ(ext(fix4(2), "~K2 ~x"), expected);
}

TEST(Extension, UnknownNames) {
  EXPECT_THROW(extension(fix2(), parse_formula("y")), ModelError);
  EXPECT_THROW(extension(fix2(), parse_formula("K3 x")), ModelError);
}

TEST(Satisfies, Fix2) {
  KripkeModel k = fix2();
  EXPECT_TRUE(satisfies(k, "a", parse_formula("x")));
  EXPECT_FALSE(satisfies(k, "a", parse_formula("K1 x")));
  EXPECT_FALSE(naive_holds(k, 0, parse_formula("K1 x")));
  EXPECT_TRUE(satisfies(k, "b", parse_formula("K2 ~x")));
  EXPECT_TRUE(naive_holds(k, 1, parse_formula("K2 ~x")));
  EXPECT_THROW(satisfies(k, "c", parse_formula("x")), ModelError);
}

TEST(ValidIn, Examples) {
  for (const KripkeModel& k : {fix1(), fix2(), fix3(), fix4(4), gen_nbar(2)}) {
    EXPECT_TRUE(valid_in(k, parse_formula("K1 x -> x")));
  }
  EXPECT_FALSE(valid_in(fix2(), parse_formula("x")));
  EXPECT_TRUE(valid_in(fix2(), parse_formula("K2 x -> K2 K2 x")));
}

TEST(SemanticsProperty, AgreesWithNaiveEvaluation) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    KripkeModel k = suite_model(seed, 15);
    FormulaSampler sampler(k, seed);
    for (int i = 0; i < 20; ++i) {
      Formula f = sampler.sample(4);
      ASSERT_EQ(extension(k, f).members(), naive_extension(k, f)) << render(f);
    }
  }
}

TEST(SemanticsProperty, DualityBlockConstancyIntrospection) {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    KripkeModel k = suite_model(seed);
    FormulaSampler sampler(k, seed + 7);
    for (int i = 0; i < 10; ++i) {
      Formula f = sampler.sample(3);
      StateSet e = extension(k, f);
      ASSERT_EQ(extension(k, Formula::negation(f)), e.complement());
      for (AgentId j = 0; j < k.num_agents(); ++j) {
        Formula kf = Formula::knows(k.agents()[j], f);
        StateSet known = extension(k, kf);
        ASSERT_EQ(extension(k, Formula::knows(k.agents()[j], kf)), known);
        for (const auto& block : k.partition(j))
          for (StateId t : block) ASSERT_EQ(known.contains(t), known.contains(block.front()));
      }
    }
  }
}

TEST(SemanticsProperty, DisjunctionDesugaringIsSound) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    KripkeModel k = suite_model(seed);
    FormulaSampler sampler(k, seed);
    for (int i = 0; i < 10; ++i) {
      Formula f = sampler.sample(2), g = sampler.sample(2);
      StateSet either = extension(k, parse_formula(render(f) + " | " + render(g)));
      StateSet neither =
          extension(k, Formula::conjunction(Formula::negation(f), Formula::negation(g)));
      ASSERT_EQ(either, neither.complement());
    }
  }
}

TEST(S5Suite, Fix2HundredFormulas) {
  S5Report r = s5_suite(fix2(), 1, 100);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.seed, 1U);
  EXPECT_GT(r.instances, 0U);
}

TEST(S5Suite, ChainAndGrid) {
  EXPECT_TRUE(s5_suite(fix4(5), 2, 100).ok());
  EXPECT_TRUE(s5_suite(gen_nbar(3), 3, 100).ok());
}

TEST(S5Suite, ReproducibleForSeed) {
  S5Report a = s5_suite(fix4(3), 99, 20), b = s5_suite(fix4(3), 99, 20);
  EXPECT_EQ(a.instances, b.instances);
  EXPECT_EQ(a.violations, b.violations);
}

}  // namespace
