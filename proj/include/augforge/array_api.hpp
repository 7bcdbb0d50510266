#pragma once

// Flat-buffer entry points for language bindings. Each call copies its input
// into a Matrix, runs the core op with Xoshiro256(seed), and returns a new
// buffer. To reproduce what `augforge augment` wrote for the file at sorted
// position i, pass derive_seed(config_seed, i) as the seed.

#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "augforge/augment.hpp"
#include "augforge/error.hpp"
#include "augforge/random.hpp"

namespace augforge {

inline constexpr std::string_view kVersion = "0.1.0";

struct ArrayView {
  std::span<const float> data;
  std::size_t n_frames = 0;
  std::size_t n_bins = 0;
};

struct ArrayResult {
  std::vector<float> data;
  std::size_t n_frames = 0;
  std::size_t n_bins = 0;
};

inline Matrix to_matrix(const ArrayView& v) {
  if (v.data.size() != v.n_frames * v.n_bins) {
    throw DataError("array buffer length does not match its shape");
  }
  for (float x : v.data) {
    if (!std::isfinite(x)) throw DataError("array contains non-finite values");
  }
  return Matrix(v.n_frames, v.n_bins, std::vector<float>(v.data.begin(), v.data.end()));
}

inline ArrayResult to_result(Matrix m) {
  const auto frames = m.n_frames();
  const auto bins = m.n_bins();
  return {std::move(m.storage()), frames, bins};
}

inline ArrayResult bind_splice_out(const ArrayView& in, std::size_t n, std::size_t t,
                                   std::uint64_t seed, std::size_t min_retained = 1) {
  Xoshiro256 rng(seed);
  return to_result(splice_out(rng, to_matrix(in), SpliceConfig{n, t, min_retained}));
}

inline ArrayResult bind_time_mask(const ArrayView& in, std::size_t n, std::size_t t,
                                  std::uint64_t seed, FillPolicy fill = FillPolicy::zero()) {
  Xoshiro256 rng(seed);
  return to_result(time_mask(rng, to_matrix(in), SpliceConfig{n, t, 0}, fill));
}

inline ArrayResult bind_freq_mask(const ArrayView& in, std::size_t n, std::size_t f,
                                  std::uint64_t seed, FillPolicy fill = FillPolicy::zero()) {
  Xoshiro256 rng(seed);
  return to_result(freq_mask(rng, to_matrix(in), SpliceConfig{n, f, 0}, fill));
}

struct MixedArray {
  ArrayResult features;
  std::vector<double> label;
};

inline MixedArray bind_mixup(const ArrayView& a, std::span<const double> label_a,
                             const ArrayView& b, std::span<const double> label_b,
                             double lambda) {
  LabeledSample sa{to_matrix(a), {label_a.begin(), label_a.end()}};
  LabeledSample sb{to_matrix(b), {label_b.begin(), label_b.end()}};
  auto mixed = mixup(sa, sb, lambda);
  return {to_result(std::get<Matrix>(std::move(mixed.features))), std::move(mixed.label)};
}

}  // namespace augforge
