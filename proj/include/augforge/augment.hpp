#pragma once

// Augmentation ops. Interval application (apply_splice, apply_mask) is
// deterministic; the sampling wrappers take an explicit RandomSource and
// document their draw order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstring>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "augforge/error.hpp"
#include "augforge/intervals.hpp"
#include "augforge/matrix.hpp"
#include "augforge/random.hpp"

namespace augforge {

enum class Axis { kTime, kFrequency };

/// Replacement value for masked cells.
struct FillPolicy {
  enum class Kind { kZero, kGlobalMean, kValue };

  Kind kind = Kind::kZero;
  float value = 0.0f;

  static FillPolicy zero() { return {Kind::kZero, 0.0f}; }
  static FillPolicy global_mean() { return {Kind::kGlobalMean, 0.0f}; }
  static FillPolicy constant(float v) {
    if (!std::isfinite(v)) throw ConfigError("fill value must be finite");
    return {Kind::kValue, v};
  }
};

/// Arithmetic mean over all cells, accumulated in double. 0 for an empty matrix.
inline double global_mean(const Matrix& m) {
  if (m.empty()) return 0.0;
  double sum = 0.0;
  for (float v : m.data()) sum += v;
  return sum / static_cast<double>(m.size());
}

namespace augment_detail {

inline void check_bounds(const IntervalSet& iv, std::size_t extent, const char* axis) {
  if (iv.max_end() > extent) {
    throw BoundsError(std::string("interval end ") + std::to_string(iv.max_end()) +
                      " exceeds " + axis + " extent " + std::to_string(extent));
  }
}

/// Number of leading intervals that can be removed while keeping at least
/// `min_retained` of `n_rows` rows. Trailing intervals are dropped first.
inline std::size_t usable_prefix(const IntervalSet& iv, std::size_t n_rows,
                                 std::size_t min_retained) {
  if (min_retained == 0) return iv.size();
  std::vector<std::size_t> cover(n_rows, 0);
  std::size_t removed = 0;
  for (const auto& it : iv) {
    for (std::size_t t = it.start; t < it.end; ++t) {
      if (cover[t]++ == 0) ++removed;
    }
  }
  std::size_t keep = iv.size();
  while (keep > 0 && n_rows - removed < min_retained) {
    const auto& it = iv.intervals()[keep - 1];
    for (std::size_t t = it.start; t < it.end; ++t) {
      if (--cover[t] == 0) --removed;
    }
    --keep;
  }
  return keep;
}

/// Copies every row outside `cut` (sorted, disjoint) in order, one
/// contiguous block per gap.
inline std::vector<float> compact_rows(std::span<const float> data, std::size_t n_rows,
                                       std::size_t row_width,
                                       const std::vector<Interval>& cut) {
  std::size_t removed = 0;
  for (const auto& c : cut) removed += c.length();
  std::vector<float> out((n_rows - removed) * row_width);
  float* dst = out.data();
  std::size_t from = 0;
  auto copy_block = [&](std::size_t begin, std::size_t end) {
    const std::size_t count = (end - begin) * row_width;
    if (count) std::memcpy(dst, data.data() + begin * row_width, count * sizeof(float));
    dst += count;
  };
  for (const auto& c : cut) {
    copy_block(from, c.start);
    from = c.end;
  }
  copy_block(from, n_rows);
  return out;
}

}  // namespace augment_detail

/// Removes every frame in the union of `iv` and concatenates the rest in
/// order. If that would leave fewer than `min_retained` frames, intervals are
/// dropped from the end of the list until it no longer does.
inline Matrix apply_splice(const Matrix& m, const IntervalSet& iv, std::size_t min_retained = 0) {
  augment_detail::check_bounds(iv, m.n_frames(), "time");
  const std::size_t keep = augment_detail::usable_prefix(iv, m.n_frames(), min_retained);
  const auto cut = (keep == iv.size() ? iv : iv.prefix(keep)).merged();
  std::size_t removed = 0;
  for (const auto& c : cut) removed += c.length();
  return Matrix(m.n_frames() - removed, m.n_bins(),
                augment_detail::compact_rows(m.data(), m.n_frames(), m.n_bins(), cut));
}

/// Same as apply_splice on a 1-D sample sequence.
inline Waveform apply_splice(const Waveform& w, const IntervalSet& iv,
                             std::size_t min_retained = 0) {
  augment_detail::check_bounds(iv, w.size(), "sample");
  const std::size_t keep = augment_detail::usable_prefix(iv, w.size(), min_retained);
  const auto cut = (keep == iv.size() ? iv : iv.prefix(keep)).merged();
  return {augment_detail::compact_rows(w.samples, w.size(), 1, cut), w.sample_rate};
}

/// Overwrites cells inside the union of `iv` along `axis` with the fill
/// value. GlobalMean is the mean of the unmodified input.
inline Matrix apply_mask(const Matrix& m, const IntervalSet& iv, FillPolicy fill,
                         Axis axis = Axis::kTime) {
  const bool time = axis == Axis::kTime;
  augment_detail::check_bounds(iv, time ? m.n_frames() : m.n_bins(),
                               time ? "time" : "frequency");
  float value = fill.value;
  if (fill.kind == FillPolicy::Kind::kZero) value = 0.0f;
  if (fill.kind == FillPolicy::Kind::kGlobalMean) value = static_cast<float>(global_mean(m));

  Matrix out = m;
  for (const auto& seg : iv.merged()) {
    if (time) {
      std::fill(out.row(seg.start).begin(), out.row(seg.end - 1).end(), value);
    } else {
      for (std::size_t f = 0; f < out.n_frames(); ++f) {
        auto row = out.row(f);
        std::fill(row.begin() + seg.start, row.begin() + seg.end, value);
      }
    }
  }
  return out;
}

/// sample_intervals over the frame axis, then apply_splice with
/// cfg.min_retained. A matrix with no frames is returned unchanged.
template <RandomSource R>
Matrix splice_out(R& rng, const Matrix& m, const SpliceConfig& cfg) {
  if (m.n_frames() == 0 || cfg.n_intervals == 0) {
    cfg.validate();
    return m;
  }
  return apply_splice(m, sample_intervals(rng, m.n_frames(), cfg), cfg.min_retained);
}

template <RandomSource R>
Matrix time_mask(R& rng, const Matrix& m, const SpliceConfig& cfg, FillPolicy fill) {
  if (m.n_frames() == 0 || cfg.n_intervals == 0) {
    cfg.validate();
    return m;
  }
  return apply_mask(m, sample_intervals(rng, m.n_frames(), cfg), fill, Axis::kTime);
}

template <RandomSource R>
Matrix freq_mask(R& rng, const Matrix& m, const SpliceConfig& cfg, FillPolicy fill) {
  if (m.n_bins() == 0 || cfg.n_intervals == 0) {
    cfg.validate();
    return m;
  }
  return apply_mask(m, sample_intervals(rng, m.n_bins(), cfg), fill, Axis::kFrequency);
}

// ---------------------------------------------------------------------------
// Token-aligned selection
// ---------------------------------------------------------------------------

struct TokenSpan {
  std::size_t start_frame = 0;
  std::size_t end_frame = 0;
  long token_id = 0;
};

inline void validate_spans(std::span<const TokenSpan> spans, std::size_t n_frames) {
  std::size_t prev_end = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& s = spans[i];
    if (s.start_frame > s.end_frame || s.start_frame < prev_end || s.end_frame > n_frames) {
      throw BoundsError("token span " + std::to_string(i) + " [" +
                        std::to_string(s.start_frame) + ", " + std::to_string(s.end_frame) +
                        ") is unsorted, overlapping or out of range");
    }
    prev_end = s.end_frame;
  }
}

/// ceil(ratio * n) with a relative guard so that e.g. 0.3 * 10 gives 3.
inline std::size_t token_quota(double ratio, std::size_t n) {
  const double x = ratio * static_cast<double>(n);
  const auto k = static_cast<std::size_t>(std::ceil(x - 1e-9 * std::max(1.0, x)));
  return std::min(k, n);
}

/// Picks k = ceil(ratio * n) distinct tokens uniformly via a partial
/// Fisher-Yates shuffle (one next_below(n - i) per pick) and returns their
/// spans in pick order.
template <RandomSource R>
IntervalSet semantic_intervals(R& rng, std::span<const TokenSpan> spans, double ratio) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw ConfigError("ratio must be in [0, 1]");
  const std::size_t n = spans.size();
  const std::size_t k = token_quota(ratio, n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  IntervalSet out;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
    std::swap(order[i], order[j]);
    out.push_back({spans[order[i]].start_frame, spans[order[i]].end_frame});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mixing
// ---------------------------------------------------------------------------

using Features = std::variant<Matrix, Waveform>;

struct LabeledSample {
  Features features;
  std::vector<double> label{1.0};

  bool is_spectrogram() const noexcept { return std::holds_alternative<Matrix>(features); }

  void validate_label() const {
    double sum = 0.0;
    for (double v : label) {
      if (!(v >= 0.0)) throw DataError("label entries must be non-negative");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6) throw DataError("label must sum to 1");
  }
};

struct MixConfig {
  double alpha = 1.0;
};

namespace augment_detail {

inline std::vector<double> mix_labels(const std::vector<double>& a, const std::vector<double>& b,
                                      double lambda) {
  if (a.size() != b.size()) throw DataError("label dimensions differ");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = lambda * a[i] + (1.0 - lambda) * b[i];
  return out;
}

inline std::vector<float> mix_values(std::span<const float> a, std::span<const float> b,
                                     double lambda) {
  std::vector<float> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = static_cast<float>(lambda * a[i] + (1.0 - lambda) * b[i]);
  }
  return out;
}

/// Standard normal via Box-Muller, two next_unit draws.
template <RandomSource R>
double standard_normal(R& rng) {
  const double u1 = 1.0 - rng.next_unit();
  const double u2 = rng.next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Gamma(shape, 1) by Marsaglia-Tsang; shape < 1 uses the
/// Gamma(shape + 1) * U^(1/shape) boost.
template <RandomSource R>
double sample_gamma(R& rng, double shape) {
  if (shape < 1.0) {
    const double g = sample_gamma(rng, shape + 1.0);
    const double u = 1.0 - rng.next_unit();
    return g * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    const double x = standard_normal(rng);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.next_unit();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace augment_detail

/// features = λ·a + (1−λ)·b, label likewise.
inline LabeledSample mixup(const LabeledSample& a, const LabeledSample& b, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("mixup lambda must be in [0, 1]");
  if (a.features.index() != b.features.index()) {
    throw DataError("mixup operands have different representations");
  }
  LabeledSample out;
  out.label = augment_detail::mix_labels(a.label, b.label, lambda);
  if (const auto* ma = std::get_if<Matrix>(&a.features)) {
    const auto& mb = std::get<Matrix>(b.features);
    if (!ma->same_shape(mb)) throw DataError("mixup operands have different shapes");
    out.features = Matrix(ma->n_frames(), ma->n_bins(),
                          augment_detail::mix_values(ma->data(), mb.data(), lambda));
  } else {
    const auto& wa = std::get<Waveform>(a.features);
    const auto& wb = std::get<Waveform>(b.features);
    if (wa.size() != wb.size() || wa.sample_rate != wb.sample_rate) {
      throw DataError("mixup waveforms differ in length or sample rate");
    }
    out.features = Waveform{augment_detail::mix_values(wa.samples, wb.samples, lambda),
                            wa.sample_rate};
  }
  return out;
}

/// Beta(α, α) as X / (X + Y) with X, Y ~ Gamma(α). Result lies in (0, 1).
template <RandomSource R>
double sample_beta(R& rng, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("beta alpha must be positive");
  const double x = augment_detail::sample_gamma(rng, alpha);
  const double y = augment_detail::sample_gamma(rng, alpha);
  double lambda = x / (x + y);
  if (!(lambda > 0.0)) lambda = std::nextafter(0.0, 1.0);
  if (!(lambda < 1.0)) lambda = std::nextafter(1.0, 0.0);
  return lambda;
}

/// Rectangle for cutmix: a frame range times a bin range.
struct Rect {
  Interval time;
  Interval freq;

  std::size_t area() const noexcept { return time.length() * freq.length(); }
};

/// a's cells inside `rect` replaced by b's; label mixed with
/// λ = 1 − area(rect) / total area.
inline LabeledSample cutmix(const LabeledSample& a, const LabeledSample& b, const Rect& rect) {
  const auto* ma = std::get_if<Matrix>(&a.features);
  const auto* mb = std::get_if<Matrix>(&b.features);
  if (!ma || !mb) throw DataError("cutmix needs spectrogram operands");
  if (!ma->same_shape(*mb)) throw DataError("cutmix operands have different shapes");
  if (rect.time.start > rect.time.end || rect.freq.start > rect.freq.end ||
      rect.time.end > ma->n_frames() || rect.freq.end > ma->n_bins()) {
    throw BoundsError("cutmix rectangle outside the spectrogram");
  }
  Matrix out = *ma;
  for (std::size_t f = rect.time.start; f < rect.time.end; ++f) {
    for (std::size_t k = rect.freq.start; k < rect.freq.end; ++k) out(f, k) = (*mb)(f, k);
  }
  const double total = static_cast<double>(ma->size());
  const double lambda = total > 0 ? 1.0 - static_cast<double>(rect.area()) / total : 1.0;
  return {std::move(out), augment_detail::mix_labels(a.label, b.label, lambda)};
}

// ---------------------------------------------------------------------------
// Time warp, waveform ops
// ---------------------------------------------------------------------------

/// Piecewise-linear re-timing with a single knot: output frame `dst_knot`
/// reads source frame `src_knot`, and the end frames stay fixed. Values
/// between source frames are linearly interpolated.
inline Matrix warp_frames(const Matrix& m, std::size_t src_knot, std::size_t dst_knot) {
  const std::size_t tau = m.n_frames();
  if (tau < 2 || src_knot == dst_knot) return m;
  if (src_knot >= tau || dst_knot >= tau) throw BoundsError("warp knot outside the input");
  const double last = static_cast<double>(tau - 1);
  const double src = static_cast<double>(src_knot);
  const double dst = static_cast<double>(dst_knot);

  Matrix out(tau, m.n_bins());
  for (std::size_t t = 0; t < tau; ++t) {
    const double x = static_cast<double>(t);
    double pos;
    if (x <= dst) {
      pos = dst_knot == 0 ? 0.0 : x * src / dst;
    } else {
      pos = src + (x - dst) * (last - src) / (last - dst);
    }
    pos = std::clamp(pos, 0.0, last);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, tau - 1);
    const double frac = pos - static_cast<double>(lo);
    const auto a = m.row(lo);
    const auto b = m.row(hi);
    auto dst_row = out.row(t);
    for (std::size_t k = 0; k < m.n_bins(); ++k) {
      dst_row[k] = static_cast<float>((1.0 - frac) * a[k] + frac * b[k]);
    }
  }
  return out;
}

/// Draws anchor w0 = W + next_below(τ − 2W), then shift
/// s = next_below(2W + 1) − W; output frame w0 + s reads source frame w0.
template <RandomSource R>
Matrix time_warp(R& rng, const Matrix& m, std::size_t max_shift) {
  const std::size_t tau = m.n_frames();
  if (tau <= 2 * max_shift) {
    throw DataError("time_warp needs more than 2W frames (have " + std::to_string(tau) +
                    ", W = " + std::to_string(max_shift) + ")");
  }
  const std::size_t anchor = max_shift + rng.next_below(tau - 2 * max_shift);
  const std::size_t target = anchor + rng.next_below(2 * max_shift + 1) - max_shift;
  return warp_frames(m, anchor, target);
}

template <RandomSource R>
Waveform splice_out_wave(R& rng, const Waveform& w, const SpliceConfig& cfg) {
  if (w.size() == 0 || cfg.n_intervals == 0) {
    cfg.validate();
    return w;
  }
  return apply_splice(w, sample_intervals(rng, w.size(), cfg), cfg.min_retained);
}

/// Linear fade-in over the first `fade_in` samples (gain i / fade_in) and
/// fade-out over the last `fade_out` samples, mirrored.
inline Waveform apply_fade(const Waveform& w, std::size_t fade_in, std::size_t fade_out) {
  Waveform out = w;
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < std::min(fade_in, n); ++i) {
    out.samples[i] = static_cast<float>(out.samples[i] * (static_cast<double>(i) / fade_in));
  }
  for (std::size_t i = 0; i < std::min(fade_out, n); ++i) {
    auto& s = out.samples[n - 1 - i];
    s = static_cast<float>(s * (static_cast<double>(i) / fade_out));
  }
  return out;
}

/// Draws fade-in then fade-out size, each next_below(floor(max_fraction·len) + 1).
template <RandomSource R>
Waveform fade(R& rng, const Waveform& w, double max_fraction = 0.5) {
  if (!(max_fraction > 0.0 && max_fraction <= 0.5)) {
    throw ConfigError("fade max_fraction must be in (0, 0.5]");
  }
  const auto limit = static_cast<std::size_t>(std::floor(max_fraction * w.size()));
  const auto fade_in = static_cast<std::size_t>(rng.next_below(limit + 1));
  const auto fade_out = static_cast<std::size_t>(rng.next_below(limit + 1));
  return apply_fade(w, fade_in, fade_out);
}

/// Resamples by linear interpolation at positions i·factor, clamped to the
/// last sample; output length round(len / factor).
inline Waveform speed_perturb(const Waveform& w, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw ConfigError("speed factor must be positive");
  const std::size_t n = w.size();
  Waveform out{{}, w.sample_rate};
  if (n == 0) return out;
  const auto out_len = static_cast<std::size_t>(std::llround(static_cast<double>(n) / factor));
  out.samples.resize(out_len);
  const double last = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < out_len; ++i) {
    const double pos = static_cast<double>(i) * factor;
    if (pos >= last) {
      out.samples[i] = w.samples[n - 1];
      continue;
    }
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    out.samples[i] =
        static_cast<float>((1.0 - frac) * w.samples[lo] + frac * w.samples[lo + 1]);
  }
  return out;
}

}  // namespace augforge
