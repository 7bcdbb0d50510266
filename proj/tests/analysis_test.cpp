#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "augforge/analysis.hpp"
#include "augforge/synthetic.hpp"
#include "test_util.hpp"

namespace augforge {
namespace {

TEST(TimeAvgStatsTest, PopulationVariance) {
  const Matrix m(2, 2, std::vector<float>{1, 3, 3, 3});
  const auto s = time_avg_stats(m);
  EXPECT_EQ(s.mean, (std::vector<double>{2, 3}));
  EXPECT_EQ(s.var, (std::vector<double>{1, 0}));
  const auto one = time_avg_stats(Matrix(1, 3, 5.0f));
  EXPECT_EQ(one.var, (std::vector<double>{0, 0, 0}));
  EXPECT_THROW(time_avg_stats(Matrix(0, 3)), DataError);
}

TEST(DistortionTest, IdentityIsZero) {
  std::mt19937_64 gen(1);
  const auto m = testing::random_matrix(gen, 50, 8);
  const auto r = distortion(m, make_augmentation(StatsMethod::kIdentity, 8, 40), 10);
  EXPECT_EQ(r.mean_distortion_pct, 0.0);
  EXPECT_EQ(r.var_distortion_pct, 0.0);
}

TEST(DistortionTest, ClosedFormZeroMask) {
  // All-ones 10x3 matrix, fixed mask of k = 3 frames: mean distortion 30%.
  const Matrix m(10, 3, 1.0f);
  const Augmentation aug = [](Xoshiro256&, const Matrix& x) {
    return apply_mask(x, {{2, 5}}, FillPolicy::zero());
  };
  const auto r = distortion(m, aug, 4);
  EXPECT_NEAR(r.mean_distortion_pct, 30.0, 1e-12);
  EXPECT_TRUE(r.var_absolute);
  EXPECT_FALSE(r.mean_absolute);
  // Variance of a 0/1 column with 3 zeros: 0.21 per bin, absolute ℓ1 = 0.63.
  EXPECT_NEAR(r.var_distortion_pct, 0.63, 1e-12);
}

TEST(DistortionTest, SpliceOutOnConstantIsExactlyZero) {
  const Matrix m(300, 4, -3.25f);
  for (std::size_t n : {2u, 8u, 64u}) {
    const auto r = distortion(m, make_augmentation(StatsMethod::kSpliceOut, n, 40), 20);
    EXPECT_EQ(r.mean_distortion_pct, 0.0);
    EXPECT_EQ(r.var_distortion_pct, 0.0);
  }
}

// tm_zero on a constant matrix: mean distortion is 100·|union|/τ per trial,
// checked against the independent union-length oracle.
TEST(DistortionTest, TimeMaskZeroOnConstantMatchesUnionOracle) {
  const std::size_t tau = 200;
  const Matrix m(tau, 2, 1.0f);
  const auto r = distortion(m, make_augmentation(StatsMethod::kTimeMaskZero, 4, 40), 20000);
  const double kept = testing::retained_length_oracle(tau, 4, 40, 200000, 5);
  const double expect = 100.0 * (tau - kept) / tau;
  EXPECT_NEAR(r.mean_distortion_pct, expect, 0.02 * expect);
}

TEST(DistortionTest, DeterministicAndNonNegative) {
  const auto corpus = random_walk_corpus(3, 200, 10, 4);
  const auto a = distortion_sweep(corpus, {StatsMethod::kSpliceOut, StatsMethod::kTimeMaskMean},
                                  {2, 8}, 40, 10, 9);
  const auto b = distortion_sweep(corpus, {StatsMethod::kSpliceOut, StatsMethod::kTimeMaskMean},
                                  {2, 8}, 40, 10, 9);
  ASSERT_EQ(a.size(), 4u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].mean_distortion_pct, b[i].mean_distortion_pct);
    EXPECT_EQ(a[i].var_distortion_pct, b[i].var_distortion_pct);
    EXPECT_GE(a[i].mean_distortion_pct, 0.0);
    EXPECT_GE(a[i].var_distortion_pct, 0.0);
  }
  EXPECT_EQ(a[0].method, "splice_out");
  EXPECT_EQ(a[3].method, "tm_mean");
  EXPECT_EQ(a[3].n_masks, 8u);
}

TEST(DistortionSweepTest, EdgeCases) {
  const std::vector<Matrix> constant{Matrix(100, 3, 2.0f)};
  const auto rows = distortion_sweep(constant, {StatsMethod::kSpliceOut}, {2, 16}, 40, 5);
  for (const auto& r : rows) {
    EXPECT_EQ(r.mean_distortion_pct, 0.0);
    EXPECT_EQ(r.var_distortion_pct, 0.0);
  }
  EXPECT_TRUE(distortion_sweep(constant, {StatsMethod::kSpliceOut}, {}, 40, 5).empty());
  EXPECT_THROW(distortion_sweep({}, {StatsMethod::kSpliceOut}, {2}, 40, 5), DataError);
}

TEST(DistortionSweepTest, SpliceBeatsZeroMaskOnRandomWalks) {
  const auto corpus = random_walk_corpus(10, 1000, 20, 1);
  const auto rows = distortion_sweep(
      corpus, {StatsMethod::kSpliceOut, StatsMethod::kTimeMaskZero}, {8}, 40, 20, 1);
  EXPECT_LT(rows[0].mean_distortion_pct, rows[1].mean_distortion_pct);
}

TEST(DistortionCsvTest, Format) {
  DistortionReport r;
  r.method = "tm_zero";
  r.n_masks = 4;
  r.max_width = 40;
  r.mean_distortion_pct = 1.5;
  r.var_distortion_pct = 0.25;
  r.trials = 100;
  EXPECT_EQ(distortion_csv({r}),
            "method,N,T,mean_distortion_pct,var_distortion_pct,trials\ntm_zero,4,40,1.5,0.25,100\n");
}

TEST(MethodTest, Names) {
  EXPECT_EQ(parse_method("tm_mean"), StatsMethod::kTimeMaskMean);
  EXPECT_EQ(method_name(StatsMethod::kSpliceOut), "splice_out");
  EXPECT_THROW(parse_method("splice"), ConfigError);
}

TEST(SyntheticTest, RandomWalkCorpusIsDeterministic) {
  const auto a = random_walk_corpus(3, 50, 8, 2);
  const auto b = random_walk_corpus(3, 50, 8, 2);
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a[i], b[i]);
    EXPECT_EQ(a[i].n_frames(), 50u);
    EXPECT_TRUE(a[i].all_finite());
  }
  EXPECT_NE(a[0], a[1]);
}

}  // namespace
}  // namespace augforge
