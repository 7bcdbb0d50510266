#pragma once

// Distortion of time-averaged statistics (per-bin mean and variance over
// frames) under augmentation, relative to the unaltered input.

#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "augforge/augment.hpp"
#include "augforge/error.hpp"
#include "augforge/matrix.hpp"
#include "augforge/parallel.hpp"
#include "augforge/random.hpp"

namespace augforge {

struct TimeAveragedStats {
  std::vector<double> mean;
  std::vector<double> var;  // population variance
};

inline TimeAveragedStats time_avg_stats(const Matrix& m) {
  if (m.n_frames() == 0) throw DataError("time-averaged statistics need at least one frame");
  const std::size_t bins = m.n_bins();
  const auto frames = static_cast<double>(m.n_frames());
  TimeAveragedStats s{std::vector<double>(bins, 0.0), std::vector<double>(bins, 0.0)};
  for (std::size_t f = 0; f < m.n_frames(); ++f) {
    const auto row = m.row(f);
    for (std::size_t k = 0; k < bins; ++k) s.mean[k] += row[k];
  }
  for (auto& v : s.mean) v /= frames;
  for (std::size_t f = 0; f < m.n_frames(); ++f) {
    const auto row = m.row(f);
    for (std::size_t k = 0; k < bins; ++k) {
      const double d = row[k] - s.mean[k];
      s.var[k] += d * d;
    }
  }
  for (auto& v : s.var) v /= frames;
  return s;
}

struct DistortionReport {
  std::string method;
  std::size_t n_masks = 0;
  std::size_t max_width = 0;
  double mean_distortion_pct = 0.0;
  double var_distortion_pct = 0.0;
  std::size_t trials = 0;
  // Set when the original statistic has zero ℓ1 norm; the corresponding
  // value is then an absolute ℓ1 distance, not a percentage.
  bool mean_absolute = false;
  bool var_absolute = false;
};

/// Seeded augmentation: the closure receives a fresh generator per trial.
using Augmentation = std::function<Matrix(Xoshiro256&, const Matrix&)>;

namespace analysis_detail {

inline double l1(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

inline double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

}  // namespace analysis_detail

/// Mean over `trials` of 100·‖stat_aug − stat_orig‖₁ / ‖stat_orig‖₁ for the
/// per-bin mean and variance. Trial t uses seed derive_seed(base_seed, t).
inline DistortionReport distortion(const Matrix& original, const Augmentation& aug,
                                   std::size_t trials, std::uint64_t base_seed = 0) {
  using namespace analysis_detail;
  if (trials < 1) throw ConfigError("distortion needs at least one trial");
  const auto ref = time_avg_stats(original);
  const double mean_norm = l1(ref.mean);
  const double var_norm = l1(ref.var);

  DistortionReport rep;
  rep.trials = trials;
  rep.mean_absolute = mean_norm == 0.0;
  rep.var_absolute = var_norm == 0.0;
  double mean_acc = 0.0;
  double var_acc = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    Xoshiro256 rng(derive_seed(base_seed, t));
    const auto got = time_avg_stats(aug(rng, original));
    if (got.mean.size() != ref.mean.size()) throw DataError("augmentation changed bin count");
    const double dm = l1_distance(got.mean, ref.mean);
    const double dv = l1_distance(got.var, ref.var);
    mean_acc += rep.mean_absolute ? dm : 100.0 * dm / mean_norm;
    var_acc += rep.var_absolute ? dv : 100.0 * dv / var_norm;
  }
  rep.mean_distortion_pct = mean_acc / static_cast<double>(trials);
  rep.var_distortion_pct = var_acc / static_cast<double>(trials);
  return rep;
}

enum class StatsMethod { kIdentity, kSpliceOut, kTimeMaskZero, kTimeMaskMean };

inline std::string_view method_name(StatsMethod m) {
  switch (m) {
    case StatsMethod::kIdentity: return "identity";
    case StatsMethod::kSpliceOut: return "splice_out";
    case StatsMethod::kTimeMaskZero: return "tm_zero";
    case StatsMethod::kTimeMaskMean: return "tm_mean";
  }
  return "?";
}

inline StatsMethod parse_method(std::string_view name) {
  for (auto m : {StatsMethod::kIdentity, StatsMethod::kSpliceOut, StatsMethod::kTimeMaskZero,
                 StatsMethod::kTimeMaskMean}) {
    if (method_name(m) == name) return m;
  }
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

inline Augmentation make_augmentation(StatsMethod method, std::size_t n_masks,
                                      std::size_t max_width) {
  const SpliceConfig cfg{n_masks, max_width, 1};
  switch (method) {
    case StatsMethod::kIdentity:
      return [](Xoshiro256&, const Matrix& m) { return m; };
    case StatsMethod::kSpliceOut:
      return [cfg](Xoshiro256& rng, const Matrix& m) { return splice_out(rng, m, cfg); };
    case StatsMethod::kTimeMaskZero:
      return [cfg](Xoshiro256& rng, const Matrix& m) {
        return time_mask(rng, m, cfg, FillPolicy::zero());
      };
    case StatsMethod::kTimeMaskMean:
      return [cfg](Xoshiro256& rng, const Matrix& m) {
        return time_mask(rng, m, cfg, FillPolicy::global_mean());
      };
  }
  throw ConfigError("unknown method");
}

/// One report per (method, N), averaged over the corpus. Item i uses base
/// seed derive_seed(seed, i) for every method and N, so methods are compared
/// on the same interval draws.
inline std::vector<DistortionReport> distortion_sweep(const std::vector<Matrix>& corpus,
                                                      const std::vector<StatsMethod>& methods,
                                                      const std::vector<std::size_t>& n_masks,
                                                      std::size_t max_width, std::size_t trials,
                                                      std::uint64_t seed = 0) {
  if (corpus.empty()) throw DataError("distortion sweep needs a non-empty corpus");
  std::vector<DistortionReport> out;
  for (auto method : methods) {
    for (std::size_t n : n_masks) {
      const auto aug = make_augmentation(method, n, max_width);
      std::vector<DistortionReport> per_item(corpus.size());
      parallel_for(corpus.size(), [&](std::size_t i) {
        per_item[i] = distortion(corpus[i], aug, trials, derive_seed(seed, i));
      });
      DistortionReport rep;
      rep.method = std::string(method_name(method));
      rep.n_masks = n;
      rep.max_width = max_width;
      rep.trials = trials;
      for (const auto& r : per_item) {
        rep.mean_distortion_pct += r.mean_distortion_pct;
        rep.var_distortion_pct += r.var_distortion_pct;
        rep.mean_absolute = rep.mean_absolute || r.mean_absolute;
        rep.var_absolute = rep.var_absolute || r.var_absolute;
      }
      rep.mean_distortion_pct /= static_cast<double>(corpus.size());
      rep.var_distortion_pct /= static_cast<double>(corpus.size());
      out.push_back(rep);
    }
  }
  return out;
}

/// CSV with header method,N,T,mean_distortion_pct,var_distortion_pct,trials.
inline std::string distortion_csv(const std::vector<DistortionReport>& rows) {
  std::ostringstream os;
  os.precision(10);
  os << "method,N,T,mean_distortion_pct,var_distortion_pct,trials\n";
  for (const auto& r : rows) {
    os << r.method << ',' << r.n_masks << ',' << r.max_width << ',' << r.mean_distortion_pct
       << ',' << r.var_distortion_pct << ',' << r.trials << '\n';
  }
  return os.str();
}

}  // namespace augforge
