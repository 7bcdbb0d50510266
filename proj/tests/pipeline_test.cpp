#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "augforge/pipeline.hpp"
#include "test_util.hpp"

namespace augforge {
namespace {

using testing::bitwise_equal;

LabeledSample spectrogram_sample(std::uint64_t seed = 1) {
  std::mt19937_64 gen(seed);
  return {testing::random_matrix(gen, 120, 16), {1.0}};
}

std::string error_message(std::string_view text) {
  try {
    parse_pipeline_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(ParsePipelineTest, Defaults) {
  const auto cfg = parse_pipeline_text(R"({"seed": 7, "pipeline": [{"op": "splice_out"}]})");
  EXPECT_EQ(cfg.seed, 7u);
  ASSERT_EQ(cfg.pipeline.size(), 1u);
  const auto& op = std::get<ops::SpliceOut>(cfg.pipeline[0]);
  EXPECT_EQ(op.cfg.n_intervals, 2u);
  EXPECT_EQ(op.cfg.max_width, 40u);
  EXPECT_EQ(op.cfg.min_retained, 1u);
}

TEST(ParsePipelineTest, AllOps) {
  const auto cfg = parse_pipeline_text(R"({"pipeline": [
    {"op": "splice_out", "n": 4, "t": 20, "min_retained": 3},
    {"op": "time_mask", "n": 1, "t": 5, "fill": "mean"},
    {"op": "freq_mask", "n": 2, "t": 3, "fill": -1.5},
    {"op": "semantic_mask", "ratio": 0.3, "token_len": 5},
    {"op": "mixup", "alpha": 0.4},
    {"op": "cutmix", "t": 10, "f": 4},
    {"op": "time_warp", "w": 3}
  ]})");
  ASSERT_EQ(cfg.pipeline.size(), 7u);
  EXPECT_EQ(std::get<ops::SpliceOut>(cfg.pipeline[0]).cfg.min_retained, 3u);
  EXPECT_EQ(std::get<ops::TimeMask>(cfg.pipeline[1]).fill.kind, FillPolicy::Kind::kGlobalMean);
  EXPECT_EQ(std::get<ops::FreqMask>(cfg.pipeline[2]).fill.value, -1.5f);
  const auto& sem = std::get<ops::Semantic>(cfg.pipeline[3]);
  EXPECT_FALSE(sem.splice);
  EXPECT_EQ(sem.token_len, 5u);
  EXPECT_DOUBLE_EQ(std::get<ops::Mixup>(cfg.pipeline[4]).alpha, 0.4);
  EXPECT_EQ(std::get<ops::Cutmix>(cfg.pipeline[5]).max_freq, 4u);
  EXPECT_EQ(std::get<ops::TimeWarp>(cfg.pipeline[6]).max_shift, 3u);
}

TEST(ParsePipelineTest, ErrorsCarryKeyPath) {
  EXPECT_NE(error_message(R"({"pipeline": [{"op": "warp_drive"}]})").find("$.pipeline[0]"),
            std::string::npos);
  EXPECT_NE(error_message(R"({"pipeline": [{"op": "splice_out"}, {"op": "time_mask", "n": -1}]})")
                .find("$.pipeline[1].n"),
            std::string::npos);
  EXPECT_NE(error_message(R"({"pipeline": [{"op": "splice_out", "widht": 3}]})").find("widht"),
            std::string::npos);
  EXPECT_NE(error_message(R"({"pipeline": [{"op": "time_mask", "fill": "median"}]})")
                .find("$.pipeline[0].fill"),
            std::string::npos);
  EXPECT_THROW(parse_pipeline_text("{not json"), ConfigError);
  EXPECT_THROW(parse_pipeline_text(R"({"pipeline": {}})"), ConfigError);
  EXPECT_THROW(parse_pipeline_text(R"({"pipeline": [{"op": "mixup", "lambda": 2}]})"),
               ConfigError);
}

TEST(ApplyPipelineTest, EmptyPipelineIsIdentity) {
  const auto s = spectrogram_sample();
  Xoshiro256 rng(3);
  const auto out = apply_pipeline(rng, s, std::span<const OpConfig>());
  EXPECT_TRUE(bitwise_equal(std::get<Matrix>(out.features), std::get<Matrix>(s.features)));
  EXPECT_EQ(out.label, s.label);
}

TEST(ApplyPipelineTest, ZeroSpliceThenUnitLambdaIsIdentity) {
  const auto cfg = parse_pipeline_text(
      R"({"pipeline": [{"op": "splice_out", "n": 0}, {"op": "mixup", "lambda": 1.0}]})");
  const auto s = spectrogram_sample();
  const std::vector<LabeledSample> pool{spectrogram_sample(2), spectrogram_sample(3)};
  Xoshiro256 rng(3);
  const auto out = apply_pipeline(rng, s, std::span(cfg.pipeline),
                                  std::span<const LabeledSample>(pool));
  EXPECT_TRUE(bitwise_equal(std::get<Matrix>(out.features), std::get<Matrix>(s.features)));
}

TEST(ApplyPipelineTest, DeterministicGivenSeed) {
  const auto cfg = parse_pipeline_text(R"({"pipeline": [
    {"op": "mixup"}, {"op": "cutmix"}, {"op": "time_warp"}, {"op": "time_mask"},
    {"op": "freq_mask"}, {"op": "splice_out", "n": 3}, {"op": "semantic_splice", "token_len": 4}
  ]})");
  const auto s = spectrogram_sample();
  const std::vector<LabeledSample> pool{spectrogram_sample(2), spectrogram_sample(3)};
  auto run = [&](std::uint64_t seed) {
    Xoshiro256 rng(seed);
    return apply_pipeline(rng, s, std::span(cfg.pipeline), std::span<const LabeledSample>(pool));
  };
  const auto a = run(11);
  const auto b = run(11);
  const auto c = run(12);
  EXPECT_TRUE(bitwise_equal(std::get<Matrix>(a.features), std::get<Matrix>(b.features)));
  EXPECT_EQ(a.label, b.label);
  EXPECT_FALSE(bitwise_equal(std::get<Matrix>(a.features), std::get<Matrix>(c.features)));
}

// The pipeline draws exactly what the standalone op draws, in order.
TEST(ApplyPipelineTest, MatchesDirectCalls) {
  const auto cfg = parse_pipeline_text(
      R"({"pipeline": [{"op": "splice_out", "n": 3, "t": 10}, {"op": "freq_mask", "n": 1, "t": 4}]})");
  const auto s = spectrogram_sample();
  Xoshiro256 r1(5), r2(5);
  const auto via = apply_pipeline(r1, s, std::span(cfg.pipeline));
  const auto spliced = splice_out(r2, std::get<Matrix>(s.features), {3, 10, 1});
  const auto direct = freq_mask(r2, spliced, {1, 4, 0}, FillPolicy::zero());
  EXPECT_TRUE(bitwise_equal(std::get<Matrix>(via.features), direct));
}

TEST(ApplyPipelineTest, WaveformOps) {
  const auto cfg = parse_pipeline_text(R"({"pipeline": [
    {"op": "splice_out_wave", "n": 2, "t": 100}, {"op": "fade"},
    {"op": "speed_perturb", "factor": 2.0}
  ]})");
  LabeledSample s{Waveform{std::vector<float>(1000, 0.5f), 16000}, {1.0}};
  Xoshiro256 rng(1);
  const auto out = apply_pipeline(rng, s, std::span(cfg.pipeline));
  const auto& w = std::get<Waveform>(out.features);
  EXPECT_LE(w.size(), 500u);
  EXPECT_GE(w.size(), 400u);
}

TEST(ApplyPipelineTest, RepresentationMismatchIsConfigError) {
  const auto spec_cfg = parse_pipeline_text(R"({"pipeline": [{"op": "time_mask"}]})");
  const auto wave_cfg = parse_pipeline_text(R"({"pipeline": [{"op": "fade"}]})");
  Xoshiro256 rng(1);
  LabeledSample wave{Waveform{std::vector<float>(100), 16000}, {1.0}};
  EXPECT_THROW(apply_pipeline(rng, wave, std::span(spec_cfg.pipeline)), ConfigError);
  EXPECT_THROW(apply_pipeline(rng, spectrogram_sample(), std::span(wave_cfg.pipeline)),
               ConfigError);
}

}  // namespace
}  // namespace augforge
