#include <gtest/gtest.h>

#include "seqtest/lowerbound.hpp"
#include "seqtest/oracles.hpp"
#include "seqtest/simulate.hpp"
#include "test_util.hpp"

using namespace seqtest;
using seqtest::testing::fig1;
using seqtest::testing::small_instance;

TEST(MinCostCover, Examples) {
  EXPECT_EQ(min_cost_cover({{{0, 3.0, 2}}, 0}).cost, 0.0);
  EXPECT_TRUE(min_cost_cover({{{0, 3.0, 2}}, 0}).chosen.empty());

  const CoverInstance three{{{0, 1.0, 2}, {1, 1.0, 1}, {2, 1.0, 1}}, 3};
  const auto res = min_cost_cover(three);
  EXPECT_EQ(res.cost, 2.0);
  ASSERT_EQ(res.chosen.size(), 2u);
  EXPECT_EQ(res.chosen[0], 0);

  EXPECT_EQ(min_cost_cover({{{0, 7.0, 5}}, 5}).cost, 7.0);
}

TEST(MinCostCover, Infeasible) {
  const auto res = min_cost_cover({{{0, 1.0, 2}}, 3});
  EXPECT_FALSE(res.feasible);
  EXPECT_TRUE(std::isinf(res.cost));
}

TEST(MinCostCover, AgreesWithEnumeration) {
  Rng rng(81);
  for (int t = 0; t < 500; ++t) {
    CoverInstance cover;
    const std::size_t n = rng.below(16);
    std::int64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      cover.items.push_back({static_cast<int>(i),
                             static_cast<double>(rng.between(1, 20)),
                             rng.between(0, 10)});
      total += cover.items.back().reward;
    }
    cover.target = rng.between(0, total + 2);
    const auto res = min_cost_cover(cover);
    const double brute = oracle::cover_by_enumeration(cover);
    ASSERT_EQ(res.cost, brute);
    if (res.feasible) {
      double c = 0.0;
      std::int64_t r = 0;
      for (int id : res.chosen) {
        c += cover.items[id].cost;
        r += cover.items[id].reward;
      }
      ASSERT_EQ(c, res.cost);
      ASSERT_GE(r, cover.target);
    }
  }
}

TEST(RealizationLb, Fig1Examples) {
  const auto inst = fig1();
  EXPECT_EQ(realization_lb(inst, Realization(5, 1)), 5.0);
  EXPECT_EQ(realization_lb(inst, Realization{1, 0, 1, 0, 0}), 3.0);
  const auto detail = realization_lb_detail(inst, Realization{1, 0, 1, 0, 0});
  EXPECT_EQ(detail.klass, 1);
  EXPECT_EQ(detail.working.chosen.size(), 2u);
  EXPECT_EQ(detail.failed.chosen.size(), 1u);
}

TEST(RealizationLb, SingleClassIsFree) {
  const SscInstance inst(std::vector<Item>(3, Item{4.0, 0.5, 2}), {0, 7});
  EXPECT_EQ(realization_lb(inst, Realization{1, 1, 0}), 0.0);
}

TEST(LowerBoundProperties, EqualsIntegerProgramAndBoundsRuns) {
  Rng rng(82);
  for (int t = 0; t < 150; ++t) {
    const auto inst = small_instance(rng, 1 + rng.below(15), 6, 6);
    const auto ours = build_list(inst);
    const auto random = random_baseline(inst, t);
    for (int r = 0; r < 4; ++r) {
      Rng xr(realization_seed(t, r));
      const Realization x = sample_realization(inst.items(), xr);
      const double lb = realization_lb(inst, x);
      ASSERT_EQ(lb, oracle::lower_bound_by_enumeration(inst, x));
      ASSERT_LE(lb, run_list(inst, ours, x).cost());
      ASSERT_LE(lb, run_list(inst, random, x).cost());
    }
  }
}

TEST(LowerBoundProperties, ZeroWeightItemsIgnored) {
  std::vector<Item> items{{1.0, 0.5, 0}, {5.0, 0.5, 2}, {1.0, 0.5, 0}};
  const SscInstance inst(items, {0, 1, 3});
  const auto detail = realization_lb_detail(inst, Realization{1, 1, 0});
  EXPECT_EQ(detail.value, 5.0);
  EXPECT_EQ(detail.working.chosen, std::vector<int>{1});
}
