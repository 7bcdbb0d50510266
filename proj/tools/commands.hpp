#pragma once

// Subcommand implementations for the augforge CLI. Each returns the process
// exit code: 0 success, 1 usage/config, 2 I/O, 3 data/format.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "augforge/augforge.hpp"

namespace augforge::cli {

namespace fs = std::filesystem;

inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kIo = 2;
inline constexpr int kData = 3;

/// Regular files under `in` (non-recursive, sorted by name), or `in` itself.
inline std::vector<fs::path> list_inputs(const fs::path& in) {
  std::error_code ec;
  if (fs::is_regular_file(in, ec)) return {in};
  if (!fs::is_directory(in, ec)) throw IoError("input '" + in.string() + "' does not exist");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(in)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

inline void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failed on '" + path.string() + "'");
}

inline std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Runs `fn`, printing library errors to stderr and mapping them to exit codes.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
}

// ---------------------------------------------------------------------------

struct FeaturizeArgs {
  fs::path in;
  fs::path out;
  FeatureConfig features;
};

inline int cmd_featurize(const FeaturizeArgs& args) {
  return guarded([&] {
    const auto files = list_inputs(args.in);
    if (files.empty()) {
      std::cerr << "warning: no input files in '" << args.in.string() << "'\n";
      return kOk;
    }
    ensure_dir(args.out);
    std::vector<int> codes(files.size(), kOk);
    std::mutex log;
    parallel_for(files.size(), [&](std::size_t i) {
      codes[i] = guarded([&] {
        const Waveform w = read_wav(files[i]);
        write_spgm(args.out / files[i].filename().replace_extension(".spgm"),
                   extract_logmel(w, args.features));
        return kOk;
      });
      if (codes[i] != kOk) {
        std::lock_guard lock(log);
        std::cerr << "failed: " << files[i].string() << "\n";
      }
    });
    return *std::max_element(codes.begin(), codes.end());
  });
}

// ---------------------------------------------------------------------------

struct AugmentArgs {
  fs::path config;
  fs::path in;
  fs::path out;
  std::optional<std::uint64_t> seed;  // overrides the config's seed
};

enum class FileKind { kSpgm, kWav, kCsv };

inline FileKind file_kind(const fs::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".spgm") return FileKind::kSpgm;
  if (ext == ".wav") return FileKind::kWav;
  if (ext == ".csv") return FileKind::kCsv;
  throw FormatError(p.string() + ": unrecognised extension (expected .spgm, .wav or .csv)");
}

inline LabeledSample load_sample(const fs::path& p) {
  switch (file_kind(p)) {
    case FileKind::kSpgm: return {read_spgm(p), {1.0}};
    case FileKind::kWav: return {read_wav(p), {1.0}};
    case FileKind::kCsv: return {read_csv_matrix(p), {1.0}};
  }
  throw FormatError(p.string() + ": unreadable");
}

inline void store_sample(const fs::path& p, FileKind kind, const LabeledSample& s) {
  if (kind == FileKind::kWav) {
    const auto* w = std::get_if<Waveform>(&s.features);
    if (!w) throw ConfigError(p.string() + ": pipeline turned a waveform into a spectrogram");
    write_wav(p, *w);
    return;
  }
  const auto* m = std::get_if<Matrix>(&s.features);
  if (!m) throw ConfigError(p.string() + ": pipeline turned a spectrogram into a waveform");
  if (kind == FileKind::kSpgm) {
    write_spgm(p, *m);
  } else {
    write_csv_matrix(p, *m);
  }
}

/// File i (sorted by name) is augmented with Xoshiro256(derive_seed(seed, i)).
/// Mixing ops draw partners from the unaugmented inputs.
inline int cmd_augment(const AugmentArgs& args) {
  return guarded([&] {
    const PipelineConfig cfg = parse_pipeline_text(read_text(args.config));
    const std::uint64_t seed = args.seed.value_or(cfg.seed);
    const auto files = list_inputs(args.in);
    if (files.empty()) {
      std::cerr << "warning: no input files in '" << args.in.string() << "'\n";
      return kOk;
    }
    std::vector<LabeledSample> inputs;
    inputs.reserve(files.size());
    for (const auto& f : files) inputs.push_back(load_sample(f));
    ensure_dir(args.out);

    std::vector<int> codes(files.size(), kOk);
    std::mutex log;
    parallel_for(files.size(), [&](std::size_t i) {
      codes[i] = guarded([&] {
        Xoshiro256 rng(derive_seed(seed, i));
        const auto result = apply_pipeline(rng, inputs[i], std::span(cfg.pipeline),
                                           std::span<const LabeledSample>(inputs));
        store_sample(args.out / files[i].filename(), file_kind(files[i]), result);
        return kOk;
      });
      if (codes[i] != kOk) {
        std::lock_guard lock(log);
        std::cerr << "failed: " << files[i].string() << "\n";
      }
    });
    return *std::max_element(codes.begin(), codes.end());
  });
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::vector<std::size_t> n_masks{2, 4, 8, 16, 32, 64};
  std::size_t t = 40;
  std::size_t tau = 1000;
  std::size_t batch = 32;
  std::size_t reps = 5;
  std::size_t bins = 80;
  std::size_t items = 0;  // 0: one batch
  double c1 = 0.0;
  double c2 = 1.0;
  std::uint64_t seed = 0;
  std::vector<std::string> methods{"splice_out", "tm_zero"};
  fs::path report;
};

inline int cmd_bench(const BenchArgs& args) {
  return guarded([&] {
    BenchConfig cfg;
    cfg.methods.clear();
    for (const auto& m : args.methods) cfg.methods.push_back(parse_method(m));
    cfg.n_masks = args.n_masks;
    cfg.max_width = args.t;
    cfg.batch_size = args.batch;
    cfg.repetitions = args.reps;
    cfg.cost = {args.c1, args.c2};
    cfg.seed = args.seed;
    cfg.validate();
    if (args.tau < 1 || args.bins < 1) throw ConfigError("tau and bins must be >= 1");
    const std::size_t items = args.items ? args.items : args.batch;
    const auto corpus = random_walk_corpus(items, args.tau, args.bins, args.seed);
    const auto report = run_benchmark(corpus, cfg);
    write_text(args.report, bench_report_json(report).dump(2) + "\n");
    return kOk;
  });
}

// ---------------------------------------------------------------------------

struct StatsArgs {
  fs::path in;
  std::vector<std::string> methods{"splice_out", "tm_zero", "tm_mean"};
  std::vector<std::size_t> n_masks{2, 4, 8, 16, 32, 64};
  std::size_t t = 40;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  fs::path report;
};

inline int cmd_stats(const StatsArgs& args) {
  return guarded([&] {
    std::vector<StatsMethod> methods;
    for (const auto& m : args.methods) methods.push_back(parse_method(m));
    if (args.t < 1) throw ConfigError("--t must be >= 1");
    if (args.trials < 1) throw ConfigError("--trials must be >= 1");
    std::error_code ec;
    if (!fs::is_directory(args.in, ec)) {
      throw IoError("input directory '" + args.in.string() + "' does not exist");
    }
    std::vector<Matrix> corpus;
    for (const auto& f : list_inputs(args.in)) {
      const auto kind = file_kind(f);
      if (kind == FileKind::kWav) throw FormatError(f.string() + ": stats expects spectrograms");
      corpus.push_back(kind == FileKind::kSpgm ? read_spgm(f) : read_csv_matrix(f));
    }
    if (corpus.empty()) throw DataError("no spectrograms in '" + args.in.string() + "'");
    const auto rows =
        distortion_sweep(corpus, methods, args.n_masks, args.t, args.trials, args.seed);
    for (const auto& r : rows) {
      if (r.mean_absolute || r.var_absolute) {
        std::cerr << "warning: " << r.method << " N=" << r.n_masks
                  << ": zero-norm reference statistic, value is absolute l1\n";
      }
    }
    write_text(args.report, distortion_csv(rows));
    return kOk;
  });
}

// ---------------------------------------------------------------------------

struct ScoreArgs {
  fs::path ref;
  fs::path hyp;
  std::size_t b = 1000;
  std::uint64_t seed = 0;
};

inline int cmd_score(const ScoreArgs& args, std::ostream& out = std::cout) {
  return guarded([&] {
    const auto counts = score_utterances(read_transcripts(args.ref), read_transcripts(args.hyp));
    Xoshiro256 rng(args.seed);
    const auto r = bootstrap_wer(std::span<const ErrorCounts>(counts), args.b, rng);
    std::uint64_t words = 0;
    for (const auto& c : counts) words += c.ref_length();
    nlohmann::json doc{{"wer", r.wer},
                       {"std_error", r.std_error},
                       {"ci95", {r.ci_low, r.ci_high}},
                       {"ci_method", "percentile"},
                       {"B", r.resamples},
                       {"n_utterances", counts.size()},
                       {"ref_words", words}};
    out << doc.dump() << "\n";
    return kOk;
  });
}

struct AbtestArgs {
  fs::path ref;
  fs::path hyp1;
  fs::path hyp2;
};

/// Infinite z (zero-variance differences with non-zero mean) is written as
/// the string "inf" or "-inf".
inline int cmd_abtest(const AbtestArgs& args, std::ostream& out = std::cout) {
  return guarded([&] {
    const auto ref = read_transcripts(args.ref);
    const auto s1 = score_utterances(ref, read_transcripts(args.hyp1));
    const auto s2 = score_utterances(ref, read_transcripts(args.hyp2));
    const auto r = mapsswe(std::span<const ErrorCounts>(s1), std::span<const ErrorCounts>(s2));
    nlohmann::json z = r.z;
    if (std::isinf(r.z)) z = r.z > 0 ? "inf" : "-inf";
    out << nlohmann::json{{"z", z}, {"p", r.p}, {"n", r.n}, {"mean_diff", r.mean_diff}}.dump()
        << "\n";
    return kOk;
  });
}

}  // namespace augforge::cli
