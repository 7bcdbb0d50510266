#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "augforge/error.hpp"
#include "augforge/random.hpp"

namespace augforge {

/// Half-open frame range [start, end).
struct Interval {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const noexcept { return end - start; }
  bool empty() const noexcept { return end == start; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Ordered list of possibly overlapping intervals. Overlaps are resolved by
/// union, so the covered length can be smaller than the sum of lengths.
class IntervalSet {
 public:
  IntervalSet() = default;
  IntervalSet(std::initializer_list<Interval> init) : intervals_(init) {
    for (const auto& iv : intervals_) check(iv);
  }
  explicit IntervalSet(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
    for (const auto& iv : intervals_) check(iv);
  }

  void push_back(Interval iv) {
    check(iv);
    intervals_.push_back(iv);
  }

  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  std::size_t size() const noexcept { return intervals_.size(); }
  bool empty() const noexcept { return intervals_.empty(); }
  auto begin() const noexcept { return intervals_.begin(); }
  auto end() const noexcept { return intervals_.end(); }

  /// First `count` intervals only.
  IntervalSet prefix(std::size_t count) const {
    count = std::min(count, intervals_.size());
    return IntervalSet(std::vector<Interval>(intervals_.begin(), intervals_.begin() + count));
  }

  /// Sorted, disjoint, non-adjacent, non-empty cover of the same frames.
  std::vector<Interval> merged() const {
    std::vector<Interval> sorted;
    sorted.reserve(intervals_.size());
    for (const auto& iv : intervals_) {
      if (!iv.empty()) sorted.push_back(iv);
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const Interval& a, const Interval& b) { return a.start < b.start; });
    std::vector<Interval> out;
    for (const auto& iv : sorted) {
      if (!out.empty() && iv.start <= out.back().end) {
        out.back().end = std::max(out.back().end, iv.end);
      } else {
        out.push_back(iv);
      }
    }
    return out;
  }

  /// Number of frames in the union.
  std::size_t coverage() const {
    std::size_t total = 0;
    for (const auto& iv : merged()) total += iv.length();
    return total;
  }

  std::size_t max_end() const noexcept {
    std::size_t m = 0;
    for (const auto& iv : intervals_) m = std::max(m, iv.end);
    return m;
  }

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  static void check(const Interval& iv) {
    if (iv.start > iv.end) {
      throw BoundsError("interval start " + std::to_string(iv.start) + " > end " +
                        std::to_string(iv.end));
    }
  }

  std::vector<Interval> intervals_;
};

/// N intervals with maximum width T. `min_retained` only matters for
/// splicing. The same struct parameterizes time and frequency masks.
struct SpliceConfig {
  std::size_t n_intervals = 0;
  std::size_t max_width = 1;
  std::size_t min_retained = 1;

  void validate() const {
    if (max_width < 1) throw ConfigError("max_width must be >= 1");
  }
};

/// Draws N intervals over an axis of `extent` frames. For each interval, in
/// order: length = next_below(T') with T' = min(T, extent), then
/// start = next_below(extent - length). When extent == length no start is
/// drawn and start is 0.
template <RandomSource R>
IntervalSet sample_intervals(R& rng, std::size_t extent, const SpliceConfig& cfg) {
  cfg.validate();
  if (extent < 1) throw DataError("cannot sample intervals over an empty axis");
  const std::size_t width = std::min(cfg.max_width, extent);
  std::vector<Interval> out;
  out.reserve(cfg.n_intervals);
  for (std::size_t i = 0; i < cfg.n_intervals; ++i) {
    const auto length = static_cast<std::size_t>(rng.next_below(width));
    const std::size_t room = extent - length;
    const auto start = room == 0 ? std::size_t{0} : static_cast<std::size_t>(rng.next_below(room));
    out.push_back({start, start + length});
  }
  return IntervalSet(std::move(out));
}

}  // namespace augforge
