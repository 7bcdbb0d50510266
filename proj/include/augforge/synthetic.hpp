#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "augforge/augment.hpp"
#include "augforge/matrix.hpp"
#include "augforge/random.hpp"

namespace augforge {

/// Log-mel-like test input: each bin is an independent Gaussian random walk
/// (step σ = `step`) around a level that falls from -2 at the lowest bin to
/// -8 at the highest.
template <RandomSource R>
Matrix random_walk_spectrogram(R& rng, std::size_t n_frames, std::size_t n_bins,
                               double step = 0.1) {
  Matrix m(n_frames, n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) {
    const double level =
        -2.0 - 6.0 * (n_bins > 1 ? static_cast<double>(k) / static_cast<double>(n_bins - 1) : 0.0);
    double x = level;
    for (std::size_t f = 0; f < n_frames; ++f) {
      x += step * augment_detail::standard_normal(rng);
      m(f, k) = static_cast<float>(x);
    }
  }
  return m;
}

/// `count` random-walk spectrograms; item i is generated from
/// derive_seed(seed, i).
inline std::vector<Matrix> random_walk_corpus(std::size_t count, std::size_t n_frames,
                                              std::size_t n_bins, std::uint64_t seed) {
  std::vector<Matrix> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Xoshiro256 rng(derive_seed(seed, i));
    out.push_back(random_walk_spectrogram(rng, n_frames, n_bins));
  }
  return out;
}

}  // namespace augforge
