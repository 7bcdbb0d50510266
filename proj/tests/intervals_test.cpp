#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "augforge/intervals.hpp"

namespace augforge {
namespace {

TEST(SampleIntervalsTest, ScriptedStream) {
  ScriptedSource rng({3, 5});
  const auto iv = sample_intervals(rng, 20, {1, 10, 1});
  ASSERT_EQ(iv.size(), 1u);
  EXPECT_EQ(iv.intervals()[0], (Interval{5, 8}));
  EXPECT_EQ(rng.ints_consumed(), 2u);
}

TEST(SampleIntervalsTest, WidthOneGivesEmptyCoverage) {
  Xoshiro256 rng(1);
  const auto iv = sample_intervals(rng, 50, {10, 1, 1});
  EXPECT_EQ(iv.size(), 10u);
  EXPECT_EQ(iv.coverage(), 0u);
}

TEST(SampleIntervalsTest, ZeroIntervals) {
  Xoshiro256 rng(1);
  EXPECT_TRUE(sample_intervals(rng, 50, {0, 10, 1}).empty());
}

TEST(SampleIntervalsTest, WidthClampedToExtent) {
  // T' = min(40, 3) = 3, so lengths are drawn below 3 and starts below 3 - length.
  ScriptedSource rng({2, 0});
  const auto iv = sample_intervals(rng, 3, {1, 40, 1});
  EXPECT_EQ(iv.intervals()[0], (Interval{0, 2}));
  ScriptedSource bad({3});
  EXPECT_THROW(sample_intervals(bad, 3, {1, 40, 1}), std::out_of_range);
}

TEST(SampleIntervalsTest, StaysInRange) {
  Xoshiro256 rng(77);
  for (std::size_t tau : {1u, 2u, 5u, 39u, 40u, 41u, 1000u}) {
    const auto iv = sample_intervals(rng, tau, {64, 40, 1});
    for (const auto& it : iv) {
      EXPECT_LT(it.length(), std::min<std::size_t>(40, tau));
      EXPECT_LE(it.end, tau);
    }
  }
}

TEST(IntervalSetTest, MergeAndCoverage) {
  const IntervalSet iv{{3, 6}, {5, 8}, {10, 10}, {0, 1}, {8, 9}};
  const auto merged = iv.merged();
  ASSERT_EQ(merged.size(), 2u);
  EXPECT_EQ(merged[0], (Interval{0, 1}));
  EXPECT_EQ(merged[1], (Interval{3, 9}));
  EXPECT_EQ(iv.coverage(), 7u);
  EXPECT_EQ(iv.max_end(), 10u);
}

TEST(IntervalSetTest, RejectsInvertedInterval) {
  EXPECT_THROW((IntervalSet{{5, 3}}), BoundsError);
}

// Property: coverage equals a brute-force count of covered frames and never
// exceeds the largest end.
TEST(IntervalSetTest, CoverageMatchesBruteForce) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 500; ++trial) {
    IntervalSet iv;
    std::vector<bool> covered(100, false);
    const int n = static_cast<int>(gen() % 8);
    for (int i = 0; i < n; ++i) {
      const std::size_t s = gen() % 100;
      const std::size_t e = s + gen() % (101 - s);
      iv.push_back({s, e});
      for (std::size_t t = s; t < e; ++t) covered[t] = true;
    }
    std::size_t count = 0;
    for (bool c : covered) count += c;
    EXPECT_EQ(iv.coverage(), count);
    EXPECT_LE(iv.coverage(), iv.max_end());
  }
}

TEST(RandomTest, XoshiroDeterministicAndBounded) {
  Xoshiro256 a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs = differs || x != c.next();
  }
  EXPECT_TRUE(differs);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LT(a.next_below(7), 7u);
    const double u = a.next_unit();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_THROW(a.next_below(0), std::invalid_argument);
}

TEST(RandomTest, NextBelowIsUniform) {
  Xoshiro256 rng(5);
  std::vector<int> hist(6, 0);
  const int n = 60000;
  for (int i = 0; i < n; ++i) ++hist[rng.next_below(6)];
  for (int h : hist) EXPECT_NEAR(h, n / 6, 400);  // ~4.4 sigma
}

TEST(RandomTest, DeriveSeedDependsOnIndex) {
  EXPECT_NE(derive_seed(0, 0), derive_seed(0, 1));
  EXPECT_EQ(derive_seed(5, 3), 5 ^ mix64(3));
}

}  // namespace
}  // namespace augforge
