#pragma once

// Log-mel front end: framing, Hann-windowed power spectrum, HTK mel filters.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "augforge/error.hpp"
#include "augforge/matrix.hpp"

namespace augforge {

struct FeatureConfig {
  double frame_len_ms = 25.0;
  double hop_ms = 10.0;
  std::size_t n_mels = 80;
  double fmin = 0.0;
  std::optional<double> fmax;  // Nyquist when unset
  double log_floor = 1e-10;

  double resolved_fmax(unsigned sample_rate) const {
    return fmax.value_or(sample_rate / 2.0);
  }

  void validate(unsigned sample_rate) const {
    if (sample_rate == 0) throw ConfigError("sample_rate must be positive");
    if (!(hop_ms > 0.0)) throw ConfigError("hop_ms must be positive");
    if (!(frame_len_ms >= hop_ms)) throw ConfigError("frame_len_ms must be >= hop_ms");
    if (n_mels < 1) throw ConfigError("n_mels must be >= 1");
    const double hi = resolved_fmax(sample_rate);
    if (!(fmin >= 0.0 && fmin < hi && hi <= sample_rate / 2.0)) {
      throw ConfigError("need 0 <= fmin < fmax <= sample_rate/2");
    }
    if (!(log_floor > 0.0)) throw ConfigError("log_floor must be positive");
  }
};

/// HTK mel scale.
inline double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
inline double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// In-place iterative radix-2 FFT. data.size() must be a power of two.
inline void fft_inplace(std::span<std::complex<double>> data) {
  const std::size_t n = data.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> step(std::cos(angle), std::sin(angle));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const auto u = data[i + k];
        const auto v = data[i + k + len / 2] * w;
        data[i + k] = u + v;
        data[i + k + len / 2] = u - v;
        w *= step;
      }
    }
  }
}

/// Rows are frames; frame i starts at sample i*hop. Signals shorter than one
/// frame yield zero rows.
inline Matrix frame_signal(const Waveform& wave, std::size_t frame_len, std::size_t hop) {
  if (frame_len < 1 || hop < 1) throw ConfigError("frame_len and hop must be >= 1");
  const std::size_t len = wave.samples.size();
  const std::size_t n_frames = len < frame_len ? 0 : (len - frame_len) / hop + 1;
  Matrix frames(n_frames, frame_len);
  for (std::size_t i = 0; i < n_frames; ++i) {
    const float* src = wave.samples.data() + i * hop;
    std::copy(src, src + frame_len, frames.row(i).begin());
  }
  return frames;
}

/// Periodic Hann window, w[n] = 0.5 - 0.5 cos(2πn/L).
inline std::vector<double> hann_window(std::size_t length) {
  std::vector<double> w(length);
  for (std::size_t n = 0; n < length; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                static_cast<double>(length));
  }
  return w;
}

/// Hann-windowed, zero-padded to the next power of two; returns |X[k]|^2 for
/// k = 0..n_fft/2.
inline Matrix power_spectrum(const Matrix& frames) {
  const std::size_t frame_len = frames.n_bins();
  if (frame_len < 2) throw ConfigError("frame length must be >= 2");
  const std::size_t n_fft = next_pow2(frame_len);
  const std::size_t n_out = n_fft / 2 + 1;
  const auto window = hann_window(frame_len);

  Matrix out(frames.n_frames(), n_out);
  std::vector<std::complex<double>> buf(n_fft);
  for (std::size_t f = 0; f < frames.n_frames(); ++f) {
    const auto row = frames.row(f);
    for (std::size_t n = 0; n < n_fft; ++n) {
      buf[n] = n < frame_len ? std::complex<double>(row[n] * window[n], 0.0)
                             : std::complex<double>(0.0, 0.0);
    }
    fft_inplace(buf);
    auto dst = out.row(f);
    for (std::size_t k = 0; k < n_out; ++k) dst[k] = static_cast<float>(std::norm(buf[k]));
  }
  return out;
}

struct FilterBank {
  Matrix weights;  // n_mels x (n_fft/2 + 1)
};

/// Triangular filters with centers equally spaced in HTK mel between
/// mel(fmin) and mel(fmax). Filter m rises from point m-1 to m and falls to
/// m+1. Throws ConfigError when some filter covers no FFT bin.
inline FilterBank mel_filterbank(std::size_t n_fft, unsigned sample_rate,
                                 const FeatureConfig& cfg) {
  cfg.validate(sample_rate);
  if (n_fft < 2) throw ConfigError("n_fft must be >= 2");
  const std::size_t n_bins = n_fft / 2 + 1;
  const std::size_t n_mels = cfg.n_mels;
  const double mel_lo = hz_to_mel(cfg.fmin);
  const double mel_hi = hz_to_mel(cfg.resolved_fmax(sample_rate));
  const double spacing = (mel_hi - mel_lo) / static_cast<double>(n_mels + 1);

  std::vector<double> points(n_mels + 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    points[i] = mel_lo + spacing * static_cast<double>(i);
  }

  FilterBank fb{Matrix(n_mels, n_bins)};
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double left = points[m];
    const double center = points[m + 1];
    const double right = points[m + 2];
    bool any = false;
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double hz = static_cast<double>(k) * sample_rate / static_cast<double>(n_fft);
      const double mel = hz_to_mel(hz);
      double w = 0.0;
      if (mel > left && mel <= center) {
        w = (mel - left) / (center - left);
      } else if (mel > center && mel < right) {
        w = (right - mel) / (right - center);
      }
      if (w > 0.0) {
        fb.weights(m, k) = static_cast<float>(w);
        any = true;
      }
    }
    if (!any) {
      throw ConfigError("mel filter " + std::to_string(m) +
                        " covers no FFT bin; n_mels too large for n_fft " +
                        std::to_string(n_fft));
    }
  }
  return fb;
}

/// Natural-log mel energies, floored at cfg.log_floor. Output is
/// n_frames x n_mels.
inline Matrix extract_logmel(const Waveform& wave, const FeatureConfig& cfg = {}) {
  cfg.validate(wave.sample_rate);
  const auto frame_len = static_cast<std::size_t>(
      std::lround(cfg.frame_len_ms * wave.sample_rate / 1000.0));
  const auto hop = static_cast<std::size_t>(std::lround(cfg.hop_ms * wave.sample_rate / 1000.0));
  if (frame_len < 2 || hop < 1) throw ConfigError("frame or hop shorter than one sample");

  const Matrix power = power_spectrum(frame_signal(wave, frame_len, hop));
  const FilterBank fb = mel_filterbank(next_pow2(frame_len), wave.sample_rate, cfg);

  Matrix out(power.n_frames(), cfg.n_mels);
  for (std::size_t f = 0; f < power.n_frames(); ++f) {
    const auto p = power.row(f);
    for (std::size_t m = 0; m < cfg.n_mels; ++m) {
      const auto w = fb.weights.row(m);
      double energy = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) energy += static_cast<double>(w[k]) * p[k];
      out(f, m) = static_cast<float>(std::log(std::max(energy, cfg.log_floor)));
    }
  }
  return out;
}

}  // namespace augforge
