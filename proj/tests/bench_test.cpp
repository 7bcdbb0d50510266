#include <vector>

#include <gtest/gtest.h>

#include "augforge/bench.hpp"
#include "augforge/synthetic.hpp"
#include "test_util.hpp"

namespace augforge {
namespace {

TEST(BatchTest, PadsToLongest) {
  const std::vector<Matrix> s{testing::ramp(3, 2), testing::ramp(5, 2)};
  const auto b = build_padded_batch(s);
  EXPECT_EQ(b.max_len, 5u);
  EXPECT_EQ(b.lengths, (std::vector<std::size_t>{3, 5}));
  EXPECT_EQ(b.padding_waste(), 2u);
  const auto first = b.sample(0);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(first[i], static_cast<float>(i));
  for (std::size_t i = 6; i < 10; ++i) EXPECT_EQ(first[i], 0.0f);
}

TEST(BatchTest, PaddedBytesClosedForm) {
  const std::vector<Matrix> s(3, Matrix(4, 80));
  const auto b = build_padded_batch(s);
  EXPECT_EQ(b.padded_bytes(), 3840u);
  EXPECT_EQ(b.padding_waste(), 0u);
  EXPECT_EQ(build_padded_batch(std::vector<Matrix>{Matrix(7, 2)}).padding_waste(), 0u);
}

TEST(BatchTest, Errors) {
  EXPECT_THROW(build_padded_batch(std::vector<Matrix>{}), DataError);
  EXPECT_THROW(build_padded_batch(std::vector<Matrix>{Matrix(2, 3), Matrix(2, 4)}), DataError);
}

TEST(CostModelTest, Validation) {
  EXPECT_THROW((CostModel{0.0, 0.0}.validate()), ConfigError);
  EXPECT_THROW((CostModel{-1.0, 1.0}.validate()), ConfigError);
  EXPECT_NO_THROW((CostModel{1.0, 0.0}.validate()));
}

TEST(ProxyStepTest, EmptySamplesAreCheap) {
  const std::vector<Matrix> s{Matrix(0, 8), Matrix(1, 8, 1.0f)};
  const auto t = proxy_step(build_padded_batch(s), CostModel{1.0, 1.0});
  EXPECT_GE(t.elapsed_ms, 0.0);
  EXPECT_TRUE(std::isfinite(t.checksum));
}

// Linear workload: doubling every length roughly doubles the time.
TEST(ProxyStepTest, LinearScaling) {
  const std::vector<Matrix> short_batch(8, Matrix(500, 80, 0.5f));
  const std::vector<Matrix> long_batch(8, Matrix(1000, 80, 0.5f));
  const auto bs = build_padded_batch(short_batch);
  const auto bl = build_padded_batch(long_batch);
  const CostModel cm{50.0, 0.0};
  std::vector<double> ts, tl;
  for (int r = 0; r < 9; ++r) {
    ts.push_back(proxy_step(bs, cm).elapsed_ms);
    tl.push_back(proxy_step(bl, cm).elapsed_ms);
  }
  const double ratio = median(tl) / median(ts);
  EXPECT_NEAR(ratio, 2.0, 0.4);
}

TEST(RunBenchmarkTest, TimeMaskLengthsConstantAndSpliceShrinks) {
  const auto corpus = random_walk_corpus(8, 300, 8, 3);
  BenchConfig cfg;
  cfg.n_masks = {0, 4, 16};
  cfg.batch_size = 4;
  cfg.cost = {1.0, 0.0};
  const auto rep = run_benchmark(corpus, cfg);
  ASSERT_EQ(rep.rows.size(), 6u);
  const auto& so0 = rep.rows[0];
  const auto& so16 = rep.rows[2];
  EXPECT_EQ(so0.sum_len, 8u * 300u);
  EXPECT_LT(so16.sum_len, rep.rows[1].sum_len);
  for (std::size_t i = 3; i < 6; ++i) {
    EXPECT_EQ(rep.rows[i].sum_len, 8u * 300u);
    EXPECT_EQ(rep.rows[i].padded_bytes, 8u * 300u * 8u * 4u);
    EXPECT_EQ(rep.rows[i].padding_waste, 0u);
    EXPECT_EQ(rep.rows[i].time_ms.size(), 5u);
  }
  EXPECT_EQ(so0.padded_bytes, rep.rows[3].padded_bytes);
}

TEST(RunBenchmarkTest, MeanSpliceLengthMatchesOracle) {
  const std::size_t tau = 200;
  const auto corpus = random_walk_corpus(2000, tau, 1, 8);
  BenchConfig cfg;
  cfg.methods = {StatsMethod::kSpliceOut};
  cfg.n_masks = {4};
  cfg.batch_size = 2000;
  cfg.cost = {1.0, 0.0};
  const auto rep = run_benchmark(corpus, cfg);
  const double mean_len = static_cast<double>(rep.rows[0].sum_len) / 2000.0;
  const double oracle = testing::retained_length_oracle(tau, 4, 40, 200000, 4);
  EXPECT_NEAR(mean_len, oracle, 0.01 * oracle);
}

TEST(RunBenchmarkTest, Validation) {
  const auto corpus = random_walk_corpus(2, 50, 4, 1);
  BenchConfig cfg;
  cfg.repetitions = 4;
  EXPECT_THROW(run_benchmark(corpus, cfg), ConfigError);
  cfg.repetitions = 5;
  EXPECT_THROW(run_benchmark({}, cfg), DataError);
}

TEST(RunBenchmarkTest, JsonReport) {
  const auto corpus = random_walk_corpus(2, 50, 4, 1);
  BenchConfig cfg;
  cfg.n_masks = {2};
  cfg.cost = {1.0, 0.0};
  const auto doc = bench_report_json(run_benchmark(corpus, cfg));
  EXPECT_EQ(doc["config"]["reps"], 5);
  EXPECT_EQ(doc["config"]["tau"], 50);
  ASSERT_EQ(doc["rows"].size(), 2u);
  EXPECT_EQ(doc["rows"][1]["method"], "tm_zero");
  EXPECT_TRUE(doc["rows"][0].contains("time_ms_median"));
  EXPECT_TRUE(doc["rows"][0].contains("padded_bytes"));
}

TEST(MedianTest, OddAndEven) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
}

}  // namespace
}  // namespace augforge
