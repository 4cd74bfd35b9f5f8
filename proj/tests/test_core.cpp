#include <gtest/gtest.h>

#include "seqtest/core.hpp"
#include "seqtest/oracles.hpp"
#include "test_util.hpp"

using namespace seqtest;
using seqtest::testing::fig1;
using seqtest::testing::small_instance;

namespace {

Realization bits(std::initializer_list<int> v) {
  Realization x;
  for (int b : v) x.push_back(static_cast<std::uint8_t>(b));
  return x;
}

// Calls fn(state, probed mask, realization bits of probed items) for every
// (probed set, outcome) pair of an instance.
template <class Fn>
void for_each_state(const SscInstance& inst, Fn fn) {
  const std::size_t n = inst.size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;
  for (std::uint64_t code = 0; code < total; ++code) {
    ProbeState st;
    std::uint64_t probed = 0;
    std::uint64_t ones = 0;
    std::uint64_t c = code;
    for (std::size_t i = 0; i < n; ++i, c /= 3) {
      const auto digit = c % 3;
      if (digit == 0) continue;
      probed |= std::uint64_t{1} << i;
      if (digit == 2) ones |= std::uint64_t{1} << i;
      st.observe(inst.item(i).weight, digit == 2);
    }
    fn(st, probed, ones);
  }
}

}  // namespace

TEST(ClassPartition, Fig1Thresholds) {
  const auto inst = fig1();
  const auto& c = inst.classes();
  EXPECT_EQ(c.num_classes(), 3);
  EXPECT_EQ(c.beta1(1), 2);
  EXPECT_EQ(c.beta0(1), 1);
  EXPECT_EQ(c.beta1(2), 5);
  EXPECT_EQ(c.beta0(2), 0);
}

TEST(ClassPartition, LastBoundaryEqualToTotalIsNormalized) {
  const ClassPartition c({0, 3, 6}, 6);
  EXPECT_EQ(c.alphas().back(), 7);
  EXPECT_EQ(c.class_of(6), 1);
  EXPECT_EQ(c.class_of(0), 0);
  EXPECT_EQ(c.class_of(2), 0);
  EXPECT_EQ(c.class_of(3), 1);
}

TEST(ClassPartition, RejectsBadBoundaries) {
  EXPECT_THROW(ClassPartition({0, 3, 3, 6}, 5), InvalidInstance);
  EXPECT_THROW(ClassPartition({1, 3, 6}, 5), InvalidInstance);
  EXPECT_THROW(ClassPartition({0, 3}, 5), InvalidInstance);
  EXPECT_THROW(ClassPartition({0}, 5), InvalidInstance);
  // clamping the outer boundaries would empty a class
  EXPECT_THROW(ClassPartition({-2, 0, 6}, 5), InvalidInstance);
}

TEST(SscInstance, RejectsInvalidItems) {
  EXPECT_THROW(SscInstance({{0.0, 0.5, 1}}, {0, 2}), InvalidInstance);
  EXPECT_THROW(SscInstance({{1.0, 1.5, 1}}, {0, 2}), InvalidInstance);
  EXPECT_THROW(SscInstance({{1.0, 0.5, -1}}, {0, 2}), InvalidInstance);
  EXPECT_THROW(SscInstance({{1.0, 0.5, 1}}, {0, 2}, -1.0), InvalidInstance);
}

TEST(Classify, Fig1Examples) {
  const auto inst = fig1();
  EXPECT_EQ(classify(inst, bits({1, 1, 0, 0, 0})), 1);  // Medium
  EXPECT_EQ(classify(inst, bits({1, 1, 1, 1, 1})), 2);  // Low
  EXPECT_EQ(score(inst, bits({1, 1, 1, 1, 1})), 5);
  EXPECT_EQ(classify(inst, bits({0, 0, 0, 0, 1})), 0);  // High
}

TEST(Classify, SingleClassIsConstant) {
  const SscInstance inst(std::vector<Item>(3, Item{1.0, 0.5, 2}), {0, 7});
  for (std::uint64_t m = 0; m < 8; ++m) {
    EXPECT_EQ(classify(inst, oracle::realization_from_mask(3, m)), 0);
  }
}

TEST(Classify, RejectsWrongLength) {
  EXPECT_THROW(classify(fig1(), bits({1, 0})), InvalidInstance);
}

TEST(StoppingCheck, Fig1Examples) {
  const auto inst = fig1();
  ProbeState st;
  st.observe(1, true);
  st.observe(1, true);
  st.observe(1, false);
  EXPECT_EQ(stopping_check(inst, st), std::optional<int>(1));

  ProbeState three;
  for (int k = 0; k < 3; ++k) three.observe(1, true);
  EXPECT_EQ(stopping_check(inst, three), std::nullopt);
}

TEST(StoppingCheck, EmptyStateWithOneClass) {
  const SscInstance inst(std::vector<Item>(4, Item{}), {0, 5});
  EXPECT_EQ(stopping_check(inst, ProbeState{}), std::optional<int>(0));
}

TEST(StoppingCheck, ThresholdFormAgreesWithIntervalForm) {
  Rng rng(11);
  for (int t = 0; t < 6; ++t) {
    const auto inst = small_instance(rng, t < 3 ? 12 : 8, 4, 5);
    const auto& c = inst.classes();
    for_each_state(inst, [&](const ProbeState& st, std::uint64_t, std::uint64_t) {
      std::optional<int> threshold;
      for (int j = 0; j < c.num_classes(); ++j) {
        if (st.s1 >= c.beta1(j) && st.s0 >= c.beta0(j)) {
          ASSERT_FALSE(threshold.has_value()) << "two classes certified";
          threshold = j;
        }
      }
      ASSERT_EQ(stopping_check(inst, st), threshold);
    });
  }
}

TEST(StoppingCheck, SoundAndMonotone) {
  Rng rng(12);
  for (int t = 0; t < 4; ++t) {
    const auto inst = small_instance(rng, 10, 4, 4);
    const std::size_t n = inst.size();
    for_each_state(inst, [&](const ProbeState& st, std::uint64_t probed,
                             std::uint64_t ones) {
      const auto j = stopping_check(inst, st);
      if (!j) return;
      // every completion has class j
      std::vector<std::size_t> open;
      for (std::size_t i = 0; i < n; ++i) {
        if (!(probed >> i & 1)) open.push_back(i);
      }
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << open.size()); ++m) {
        std::uint64_t full = ones;
        for (std::size_t b = 0; b < open.size(); ++b) {
          if (m >> b & 1) full |= std::uint64_t{1} << open[b];
        }
        ASSERT_EQ(classify(inst, oracle::realization_from_mask(n, full)), *j);
      }
      // one more probe of either outcome keeps the answer
      for (std::size_t i : open) {
        for (bool working : {false, true}) {
          ProbeState next = st;
          next.observe(inst.item(i).weight, working);
          ASSERT_EQ(stopping_check(inst, next), j);
        }
      }
    });
  }
}

TEST(Reduction, MixedSignExample) {
  const std::vector<Item> raw{{1.0, 0.2, -3}};
  const std::vector<std::int64_t> alphas{-3, 0, 1};
  const auto red = reduce_negative_weights(raw, alphas);
  ASSERT_EQ(red.instance.size(), 1u);
  EXPECT_EQ(red.instance.item(0).weight, 3);
  EXPECT_DOUBLE_EQ(red.instance.item(0).prob, 0.8);
  const auto a = red.instance.classes().alphas();
  EXPECT_EQ(std::vector<std::int64_t>(a.begin(), a.end()),
            (std::vector<std::int64_t>{0, 3, 4}));
  EXPECT_TRUE(red.flipped[0]);
  EXPECT_EQ(red.offset, 3);
}

TEST(Reduction, NonnegativeInstanceUnchanged) {
  const std::vector<Item> raw{{2.0, 0.3, 1}, {1.0, 0.6, 4}};
  const std::vector<std::int64_t> alphas{0, 2, 6};
  const auto red = reduce_negative_weights(raw, alphas);
  EXPECT_EQ(red.offset, 0);
  EXPECT_EQ(red.flipped, std::vector<bool>(2, false));
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(red.instance.item(i).weight, raw[i].weight);
    EXPECT_EQ(red.instance.item(i).prob, raw[i].prob);
  }
}

TEST(Reduction, RejectsNonIncreasingAlphas) {
  const std::vector<Item> raw{{1.0, 0.5, -1}};
  const std::vector<std::int64_t> alphas{0, 0, 1};
  EXPECT_THROW(reduce_negative_weights(raw, alphas), InvalidInstance);
}

TEST(Reduction, ClassifyCommutesExhaustively) {
  Rng rng(13);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = t == 0 ? 4 : (t < 5 ? 12 : 1 + rng.below(8));
    auto items = seqtest::testing::small_items(rng, n, 5);
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    for (Item& it : items) {
      if (rng.below(2)) it.weight = -it.weight;
      (it.weight < 0 ? lo : hi) += it.weight;
    }
    std::vector<std::int64_t> alphas{lo};
    for (std::int64_t a = lo + 1; a <= hi; ++a) {
      if (rng.below(3) == 0) alphas.push_back(a);
    }
    alphas.push_back(hi + 1);
    const auto red = reduce_negative_weights(items, alphas);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
      const Realization x = oracle::realization_from_mask(n, m);
      std::int64_t s = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (x[i]) s += items[i].weight;
      }
      int expect = 0;
      for (std::size_t j = 1; j + 1 < alphas.size(); ++j) {
        if (s >= alphas[j]) expect = static_cast<int>(j);
      }
      ASSERT_EQ(classify(red.instance, red.map(x)), expect);
    }
  }
}
