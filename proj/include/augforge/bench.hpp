#pragma once

// Desk-scale efficiency benchmark: padded memory and the wall time of a
// length-aware proxy workload, SpliceOut vs time masking, swept over the
// number of masks.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#if defined(__linux__)
#include <sched.h>
#endif

#include "json.hpp"

#include "augforge/analysis.hpp"
#include "augforge/augment.hpp"
#include "augforge/error.hpp"
#include "augforge/matrix.hpp"
#include "augforge/parallel.hpp"
#include "augforge/random.hpp"

namespace augforge {

/// Zero-padded batch × max_len × n_bins tensor plus true lengths.
struct Batch {
  std::vector<float> data;
  std::vector<std::size_t> lengths;
  std::size_t max_len = 0;
  std::size_t n_bins = 0;

  std::size_t size() const noexcept { return lengths.size(); }
  std::uint64_t padded_bytes() const noexcept {
    return static_cast<std::uint64_t>(size()) * max_len * n_bins * sizeof(float);
  }
  std::uint64_t sum_len() const noexcept {
    std::uint64_t s = 0;
    for (auto l : lengths) s += l;
    return s;
  }
  std::uint64_t padding_waste() const noexcept {
    return static_cast<std::uint64_t>(size()) * max_len - sum_len();
  }
  std::span<const float> sample(std::size_t i) const {
    return {data.data() + i * max_len * n_bins, max_len * n_bins};
  }
};

inline Batch build_padded_batch(std::span<const Matrix> samples) {
  if (samples.empty()) throw DataError("cannot batch zero samples");
  Batch b;
  b.n_bins = samples[0].n_bins();
  for (const auto& s : samples) {
    if (s.n_bins() != b.n_bins) throw DataError("batch samples differ in bin count");
    b.max_len = std::max(b.max_len, s.n_frames());
    b.lengths.push_back(s.n_frames());
  }
  b.data.assign(samples.size() * b.max_len * b.n_bins, 0.0f);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::copy(samples[i].data().begin(), samples[i].data().end(),
              b.data.begin() + static_cast<std::ptrdiff_t>(i * b.max_len * b.n_bins));
  }
  return b;
}

/// Work per sample of length L: round(linear·L) frame passes plus
/// round(quadratic·L²) pairwise frame dot products.
struct CostModel {
  double linear = 0.0;
  double quadratic = 1.0;

  void validate() const {
    if (!(linear >= 0.0) || !(quadratic >= 0.0) || (linear == 0.0 && quadratic == 0.0)) {
      throw ConfigError("cost model needs non-negative coefficients, not both zero");
    }
  }
};

struct StepTiming {
  double elapsed_ms = 0.0;
  double checksum = 0.0;
};

namespace bench_detail {

inline float dot(const float* a, const float* b, std::size_t n) {
  float s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  for (; k < n; ++k) s0 += a[k] * b[k];
  return (s0 + s1) + (s2 + s3);
}

inline double sample_workload(const float* frames, std::size_t len, std::size_t bins,
                              const CostModel& cm, std::span<const float> weights) {
  if (len == 0 || bins == 0) return 0.0;
  double acc = 0.0;
  const auto linear = static_cast<std::uint64_t>(std::llround(cm.linear * static_cast<double>(len)));
  for (std::uint64_t r = 0; r < linear; ++r) {
    acc += dot(frames + (r % len) * bins, weights.data(), bins);
  }
  const double l = static_cast<double>(len);
  const auto pairs = static_cast<std::uint64_t>(std::llround(cm.quadratic * l * l));
  std::size_t i = 0;
  std::size_t j = 0;
  for (std::uint64_t p = 0; p < pairs; ++p) {
    acc += dot(frames + i * bins, frames + j * bins, bins);
    if (++j == len) {
      j = 0;
      if (++i == len) i = 0;
    }
  }
  return acc;
}

/// Pins the calling thread to its current CPU for the lifetime of the guard.
class CpuPin {
 public:
  CpuPin() {
#if defined(__linux__)
    if (sched_getaffinity(0, sizeof(saved_), &saved_) == 0) {
      const int cpu = sched_getcpu();
      if (cpu >= 0) {
        cpu_set_t one;
        CPU_ZERO(&one);
        CPU_SET(cpu, &one);
        pinned_ = sched_setaffinity(0, sizeof(one), &one) == 0;
      }
    }
#endif
  }
  ~CpuPin() {
#if defined(__linux__)
    if (pinned_) sched_setaffinity(0, sizeof(saved_), &saved_);
#endif
  }
  CpuPin(const CpuPin&) = delete;
  CpuPin& operator=(const CpuPin&) = delete;

 private:
#if defined(__linux__)
  cpu_set_t saved_{};
#endif
  bool pinned_ = false;
};

}  // namespace bench_detail

/// Runs the proxy workload over every sample at its true length and returns
/// the wall time. The checksum keeps the work observable.
inline StepTiming proxy_step(const Batch& batch, const CostModel& cm) {
  cm.validate();
  std::vector<float> weights(batch.n_bins);
  for (std::size_t k = 0; k < weights.size(); ++k) weights[k] = 1.0f / static_cast<float>(k + 1);
  const auto start = std::chrono::steady_clock::now();
  double checksum = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    checksum += bench_detail::sample_workload(batch.sample(i).data(), batch.lengths[i],
                                              batch.n_bins, cm, weights);
  }
  const auto stop = std::chrono::steady_clock::now();
  return {std::chrono::duration<double, std::milli>(stop - start).count(), checksum};
}

struct BenchConfig {
  std::vector<StatsMethod> methods{StatsMethod::kSpliceOut, StatsMethod::kTimeMaskZero};
  std::vector<std::size_t> n_masks{2, 4, 8, 16, 32, 64};
  std::size_t max_width = 40;
  std::size_t batch_size = 32;
  std::size_t repetitions = 5;
  CostModel cost{};
  std::uint64_t seed = 0;

  void validate() const {
    if (repetitions < 5) throw ConfigError("benchmark needs at least 5 repetitions");
    if (batch_size < 1) throw ConfigError("batch size must be >= 1");
    if (max_width < 1) throw ConfigError("T must be >= 1");
    cost.validate();
  }
};

struct BenchRow {
  std::string method;
  std::size_t n_masks = 0;
  std::size_t max_width = 0;
  double time_ms_median = 0.0;
  std::uint64_t padded_bytes = 0;
  std::uint64_t sum_len = 0;
  std::uint64_t sum_len_sq = 0;
  std::uint64_t padding_waste = 0;
  std::vector<double> time_ms;  // per repetition
};

struct BenchReport {
  BenchConfig config;
  std::size_t corpus_size = 0;
  std::size_t n_frames = 0;
  std::size_t n_bins = 0;
  std::vector<BenchRow> rows;
  double checksum = 0.0;
};

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

/// Augments every corpus item (item i seeded with derive_seed(seed, i) for all
/// configurations), batches the results in corpus order, then times the
/// proxy step. Repetitions are interleaved across configurations so slow
/// drift in machine speed hits all of them alike.
inline BenchReport run_benchmark(const std::vector<Matrix>& corpus, const BenchConfig& cfg) {
  cfg.validate();
  if (corpus.empty()) throw DataError("benchmark needs a non-empty corpus");

  struct Job {
    BenchRow row;
    std::vector<Batch> batches;
  };
  std::vector<Job> jobs;
  for (auto method : cfg.methods) {
    for (std::size_t n : cfg.n_masks) {
      const auto aug = make_augmentation(method, n, cfg.max_width);
      std::vector<Matrix> augmented(corpus.size());
      parallel_for(corpus.size(), [&](std::size_t i) {
        Xoshiro256 rng(derive_seed(cfg.seed, i));
        augmented[i] = aug(rng, corpus[i]);
      });
      Job job;
      job.row.method = std::string(method_name(method));
      job.row.n_masks = n;
      job.row.max_width = cfg.max_width;
      for (const auto& m : augmented) {
        job.row.sum_len += m.n_frames();
        job.row.sum_len_sq += static_cast<std::uint64_t>(m.n_frames()) * m.n_frames();
      }
      for (std::size_t at = 0; at < augmented.size(); at += cfg.batch_size) {
        const std::size_t count = std::min(cfg.batch_size, augmented.size() - at);
        job.batches.push_back(build_padded_batch(std::span(augmented).subspan(at, count)));
        job.row.padded_bytes += job.batches.back().padded_bytes();
        job.row.padding_waste += job.batches.back().padding_waste();
      }
      jobs.push_back(std::move(job));
    }
  }

  BenchReport report;
  report.config = cfg;
  report.corpus_size = corpus.size();
  report.n_frames = corpus[0].n_frames();
  report.n_bins = corpus[0].n_bins();
  {
    bench_detail::CpuPin pin;
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
      for (auto& job : jobs) {
        double ms = 0.0;
        for (const auto& b : job.batches) {
          const auto t = proxy_step(b, cfg.cost);
          ms += t.elapsed_ms;
          report.checksum += t.checksum;
        }
        job.row.time_ms.push_back(ms);
      }
    }
  }
  for (auto& job : jobs) {
    job.row.time_ms_median = median(job.row.time_ms);
    report.rows.push_back(std::move(job.row));
  }
  return report;
}

inline nlohmann::json bench_report_json(const BenchReport& r) {
  nlohmann::json methods = nlohmann::json::array();
  for (auto m : r.config.methods) methods.push_back(std::string(method_name(m)));
  nlohmann::json doc;
  doc["config"] = {
      {"methods", methods},
      {"n_masks", r.config.n_masks},
      {"T", r.config.max_width},
      {"tau", r.n_frames},
      {"n_bins", r.n_bins},
      {"batch", r.config.batch_size},
      {"corpus_size", r.corpus_size},
      {"reps", r.config.repetitions},
      {"cost_linear", r.config.cost.linear},
      {"cost_quadratic", r.config.cost.quadratic},
      {"seed", r.config.seed},
      {"time_statistic", "median"},
      {"workload", "proxy"},
  };
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows) {
    doc["rows"].push_back({{"method", row.method},
                           {"N", row.n_masks},
                           {"T", row.max_width},
                           {"time_ms_median", row.time_ms_median},
                           {"padded_bytes", row.padded_bytes},
                           {"sum_len", row.sum_len},
                           {"sum_len_sq", row.sum_len_sq},
                           {"padding_waste", row.padding_waste}});
  }
  return doc;
}

}  // namespace augforge
