#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "augforge/error.hpp"

namespace augforge {

/// Time-major 2-D float matrix: row = frame, column = frequency bin.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t n_frames, std::size_t n_bins, float fill = 0.0f)
      : n_frames_(n_frames), n_bins_(n_bins), data_(n_frames * n_bins, fill) {}
  Matrix(std::size_t n_frames, std::size_t n_bins, std::vector<float> data)
      : n_frames_(n_frames), n_bins_(n_bins), data_(std::move(data)) {
    if (data_.size() != n_frames_ * n_bins_) {
      throw DataError("matrix data length " + std::to_string(data_.size()) +
                      " does not match " + std::to_string(n_frames_) + "x" +
                      std::to_string(n_bins_));
    }
  }

  std::size_t n_frames() const noexcept { return n_frames_; }
  std::size_t n_bins() const noexcept { return n_bins_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  float& operator()(std::size_t frame, std::size_t bin) {
    return data_[frame * n_bins_ + bin];
  }
  float operator()(std::size_t frame, std::size_t bin) const {
    return data_[frame * n_bins_ + bin];
  }

  std::span<float> row(std::size_t frame) {
    return {data_.data() + frame * n_bins_, n_bins_};
  }
  std::span<const float> row(std::size_t frame) const {
    return {data_.data() + frame * n_bins_, n_bins_};
  }

  std::span<float> data() noexcept { return data_; }
  std::span<const float> data() const noexcept { return data_; }
  std::vector<float>& storage() noexcept { return data_; }
  const std::vector<float>& storage() const noexcept { return data_; }

  bool same_shape(const Matrix& other) const noexcept {
    return n_frames_ == other.n_frames_ && n_bins_ == other.n_bins_;
  }

  bool all_finite() const noexcept {
    for (float v : data_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_frames_ = 0;
  std::size_t n_bins_ = 0;
  std::vector<float> data_;
};

struct Waveform {
  std::vector<float> samples;
  unsigned sample_rate = 16000;

  std::size_t size() const noexcept { return samples.size(); }

  friend bool operator==(const Waveform&, const Waveform&) = default;
};

}  // namespace augforge
