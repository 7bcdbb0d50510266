#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace augforge::cli;

  CLI::App app{"augforge: SpliceOut and spectrogram augmentation toolkit"};
  app.set_version_flag("--version", std::string(augforge::kVersion));
  app.require_subcommand(1);

  FeaturizeArgs feat;
  double fmax = 0.0;
  auto* featurize = app.add_subcommand("featurize", "WAV files to log-mel SPGM files");
  featurize->add_option("--in", feat.in, "input WAV file or directory")->required();
  featurize->add_option("--out", feat.out, "output directory")->required();
  featurize->add_option("--frame-ms", feat.features.frame_len_ms, "frame length in ms")
      ->capture_default_str();
  featurize->add_option("--hop-ms", feat.features.hop_ms, "hop in ms")->capture_default_str();
  featurize->add_option("--mels", feat.features.n_mels, "number of mel filters")
      ->capture_default_str();
  featurize->add_option("--fmin", feat.features.fmin, "lowest filter edge in Hz")
      ->capture_default_str();
  auto* fmax_opt = featurize->add_option("--fmax", fmax, "highest filter edge in Hz (default Nyquist)");
  featurize->add_option("--log-floor", feat.features.log_floor, "energy floor before log")
      ->capture_default_str();

  AugmentArgs aug;
  std::uint64_t aug_seed = 0;
  auto* augment = app.add_subcommand("augment", "apply a JSON augmentation pipeline");
  augment->add_option("--config", aug.config, "pipeline JSON")->required();
  augment->add_option("--in", aug.in, "input file or directory")->required();
  augment->add_option("--out", aug.out, "output directory")->required();
  auto* seed_opt = augment->add_option("--seed", aug_seed, "override the config seed");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "SpliceOut vs time-masking efficiency sweep");
  bench_cmd->add_option("--n-masks", bench.n_masks, "mask counts")->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--t", bench.t, "max interval width T")->capture_default_str();
  bench_cmd->add_option("--tau", bench.tau, "frames per synthetic input")->capture_default_str();
  bench_cmd->add_option("--batch", bench.batch, "batch size")->capture_default_str();
  bench_cmd->add_option("--reps", bench.reps, "timed repetitions (>= 5)")->capture_default_str();
  bench_cmd->add_option("--report", bench.report, "output JSON")->required();
  bench_cmd->add_option("--bins", bench.bins, "bins per frame")->capture_default_str();
  bench_cmd->add_option("--items", bench.items, "corpus size (default: one batch)");
  bench_cmd->add_option("--c1", bench.c1, "linear cost coefficient")->capture_default_str();
  bench_cmd->add_option("--c2", bench.c2, "quadratic cost coefficient")->capture_default_str();
  bench_cmd->add_option("--methods", bench.methods, "methods")->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "seed")->capture_default_str();

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "time-averaged statistics distortion sweep");
  stats_cmd->add_option("--in", stats.in, "directory of SPGM/CSV spectrograms")->required();
  stats_cmd->add_option("--methods", stats.methods,
                        "identity, splice_out, tm_zero, tm_mean")
      ->delimiter(',')->capture_default_str();
  stats_cmd->add_option("--n-masks", stats.n_masks, "mask counts")->delimiter(',')
      ->capture_default_str();
  stats_cmd->add_option("--t", stats.t, "max interval width T")->capture_default_str();
  stats_cmd->add_option("--trials", stats.trials, "trials per input")->capture_default_str();
  stats_cmd->add_option("--seed", stats.seed, "seed")->capture_default_str();
  stats_cmd->add_option("--report", stats.report, "output CSV")->required();

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "corpus WER with bootstrap standard error");
  score_cmd->add_option("--ref", score.ref, "reference transcripts")->required();
  score_cmd->add_option("--hyp", score.hyp, "hypothesis transcripts")->required();
  score_cmd->add_option("--b", score.b, "bootstrap resamples")->capture_default_str();
  score_cmd->add_option("--seed", score.seed, "seed")->capture_default_str();

  AbtestArgs ab;
  auto* ab_cmd = app.add_subcommand("abtest", "matched-pairs significance test of two systems");
  ab_cmd->add_option("--ref", ab.ref, "reference transcripts")->required();
  ab_cmd->add_option("--hyp1", ab.hyp1, "system 1 transcripts")->required();
  ab_cmd->add_option("--hyp2", ab.hyp2, "system 2 transcripts")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (featurize->parsed()) {
    if (fmax_opt->count()) feat.features.fmax = fmax;
    return cmd_featurize(feat);
  }
  if (augment->parsed()) {
    if (seed_opt->count()) aug.seed = aug_seed;
    return cmd_augment(aug);
  }
  if (bench_cmd->parsed()) return cmd_bench(bench);
  if (stats_cmd->parsed()) return cmd_stats(stats);
  if (score_cmd->parsed()) return cmd_score(score);
  if (ab_cmd->parsed()) return cmd_abtest(ab);
  return kUsage;
}
