#pragma once

// Independent reference implementations for the scoring statistics.

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "augforge/evalstats.hpp"

namespace augforge::testing {

/// Every sequence of length 0..max_len over {0, ..., alphabet-1}.
inline std::vector<std::vector<int>> all_sequences(std::size_t max_len, int alphabet) {
  std::vector<std::vector<int>> out{{}};
  std::vector<std::vector<int>> level{{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& s : level) {
      for (int a = 0; a < alphabet; ++a) {
        auto t = s;
        t.push_back(a);
        next.push_back(std::move(t));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return out;
}

/// Top-down memoized recursion over prefix lengths. Among minimal-cost final
/// operations it takes the first of diagonal, deletion, insertion.
class AlignmentOracle {
 public:
  AlignmentOracle(const std::vector<int>& ref, const std::vector<int>& hyp)
      : ref_(ref), hyp_(hyp), memo_((ref.size() + 1) * (hyp.size() + 1)) {}

  ErrorCounts solve() { return best(ref_.size(), hyp_.size()).second; }

 private:
  using Entry = std::pair<std::uint64_t, ErrorCounts>;

  Entry best(std::size_t i, std::size_t j) {
    if (i == 0 && j == 0) return {0, {}};
    auto& slot = memo_[i * (hyp_.size() + 1) + j];
    if (slot) return *slot;

    Entry pick{~0ull, {}};
    auto consider = [&](Entry cand) {
      if (cand.first < pick.first) pick = cand;
    };
    if (i > 0 && j > 0) {
      auto e = best(i - 1, j - 1);
      if (ref_[i - 1] == hyp_[j - 1]) {
        ++e.second.correct;
      } else {
        ++e.first;
        ++e.second.substitutions;
      }
      consider(e);
    }
    if (i > 0) {
      auto e = best(i - 1, j);
      ++e.first;
      ++e.second.deletions;
      consider(e);
    }
    if (j > 0) {
      auto e = best(i, j - 1);
      ++e.first;
      ++e.second.insertions;
      consider(e);
    }
    slot = pick;
    return pick;
  }

  const std::vector<int>& ref_;
  const std::vector<int>& hyp_;
  std::vector<std::optional<Entry>> memo_;
};

inline ErrorCounts oracle_alignment(const std::vector<int>& ref, const std::vector<int>& hyp) {
  return AlignmentOracle(ref, hyp).solve();
}

/// Exact bootstrap SE by enumerating all n^n equally likely resamples.
/// Resamples with no reference words count as WER 0.
inline double enumerated_bootstrap_se(const std::vector<ErrorCounts>& c) {
  const std::size_t n = c.size();
  std::vector<std::size_t> idx(n, 0);
  double sum = 0.0;
  double sum_sq = 0.0;
  double count = 0.0;
  while (true) {
    std::uint64_t errors = 0;
    std::uint64_t words = 0;
    for (auto k : idx) {
      errors += c[k].errors();
      words += c[k].ref_length();
    }
    const double w = words ? static_cast<double>(errors) / static_cast<double>(words) : 0.0;
    sum += w;
    sum_sq += w * w;
    count += 1.0;
    std::size_t pos = 0;
    while (pos < n && ++idx[pos] == n) idx[pos++] = 0;
    if (pos == n) break;
  }
  const double mean = sum / count;
  return std::sqrt(std::max(0.0, sum_sq / count - mean * mean));
}

}  // namespace augforge::testing
