#pragma once

#include <array>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace augforge {

/// Anything that hands out uniform integers in [0, k) and uniform doubles in
/// [0, 1). Every operation documents the order in which it draws, so a
/// scripted source can reproduce a given outcome exactly.
template <typename R>
concept RandomSource = requires(R& r, std::uint64_t k) {
  { r.next_below(k) } -> std::convertible_to<std::uint64_t>;
  { r.next_unit() } -> std::convertible_to<double>;
};

/// SplitMix64 finalizer. Used to expand seeds and to derive per-item seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-item seed: base ⊕ mix64(index). Serial and parallel runs agree because
/// the seed depends only on the item's position.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return base ^ mix64(index);
}

/// xoshiro256** seeded through SplitMix64.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed = 0) noexcept {
    std::uint64_t x = seed;
    for (auto& word : s_) {
      word = mix64(x);
      x += 0x9e3779b97f4a7c15ULL;
    }
  }

  std::uint64_t next() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Unbiased bounded integer (Lemire's multiply-and-reject). k must be > 0.
  std::uint64_t next_below(std::uint64_t k) {
    if (k == 0) throw std::invalid_argument("next_below(0)");
    __uint128_t m = static_cast<__uint128_t>(next()) * k;
    auto low = static_cast<std::uint64_t>(m);
    if (low < k) {
      const std::uint64_t threshold = (0 - k) % k;
      while (low < threshold) {
        m = static_cast<__uint128_t>(next()) * k;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// 53-bit uniform double in [0, 1).
  double next_unit() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

/// Replays a fixed list of integers (for next_below) and units (for
/// next_unit). Running past the end is an error. Intended for tests.
class ScriptedSource {
 public:
  explicit ScriptedSource(std::vector<std::uint64_t> ints,
                          std::vector<double> units = {})
      : ints_(std::move(ints)), units_(std::move(units)) {}

  std::uint64_t next_below(std::uint64_t k) {
    if (next_int_ >= ints_.size()) throw std::out_of_range("script exhausted");
    const std::uint64_t v = ints_[next_int_++];
    if (v >= k) throw std::out_of_range("scripted value out of range");
    return v;
  }

  double next_unit() {
    if (next_unit_ >= units_.size()) throw std::out_of_range("script exhausted");
    return units_[next_unit_++];
  }

  std::size_t ints_consumed() const noexcept { return next_int_; }

 private:
  std::vector<std::uint64_t> ints_;
  std::vector<double> units_;
  std::size_t next_int_ = 0;
  std::size_t next_unit_ = 0;
};

static_assert(RandomSource<Xoshiro256>);
static_assert(RandomSource<ScriptedSource>);

}  // namespace augforge
