#pragma once

// WER alignment and the two significance tools used for ASR comparisons:
// bootstrap standard error / percentile interval of corpus WER, and the
// matched-pairs sentence-segment word error (MAPSSWE) z-test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "augforge/error.hpp"
#include "augforge/random.hpp"
#include "augforge/signal_io.hpp"

namespace augforge {

struct ErrorCounts {
  std::uint64_t correct = 0;
  std::uint64_t substitutions = 0;
  std::uint64_t insertions = 0;
  std::uint64_t deletions = 0;

  std::uint64_t ref_length() const noexcept { return correct + substitutions + deletions; }
  std::uint64_t errors() const noexcept { return substitutions + insertions + deletions; }

  friend bool operator==(const ErrorCounts&, const ErrorCounts&) = default;
};

/// Unit-cost Levenshtein alignment. The backtrace starts at the end and
/// prefers, on ties, diagonal (match or substitution), then deletion, then
/// insertion.
template <typename Token>
ErrorCounts align_wer(const std::vector<Token>& ref, const std::vector<Token>& hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  const std::size_t w = m + 1;
  std::vector<std::uint32_t> cost((n + 1) * w);
  for (std::size_t i = 0; i <= n; ++i) cost[i * w] = static_cast<std::uint32_t>(i);
  for (std::size_t j = 0; j <= m; ++j) cost[j] = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::uint32_t sub = cost[(i - 1) * w + j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      const std::uint32_t del = cost[(i - 1) * w + j] + 1;
      const std::uint32_t ins = cost[i * w + j - 1] + 1;
      cost[i * w + j] = std::min({sub, del, ins});
    }
  }

  ErrorCounts c;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    const std::uint32_t here = cost[i * w + j];
    if (i > 0 && j > 0) {
      const bool match = ref[i - 1] == hyp[j - 1];
      if (here == cost[(i - 1) * w + j - 1] + (match ? 0 : 1)) {
        (match ? c.correct : c.substitutions)++;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && here == cost[(i - 1) * w + j] + 1) {
      ++c.deletions;
      --i;
    } else {
      ++c.insertions;
      --j;
    }
  }
  return c;
}

inline double corpus_wer(std::span<const ErrorCounts> counts) {
  std::uint64_t errors = 0;
  std::uint64_t words = 0;
  for (const auto& c : counts) {
    errors += c.errors();
    words += c.ref_length();
  }
  if (words == 0) throw DataError("corpus has no reference words");
  return static_cast<double>(errors) / static_cast<double>(words);
}

struct BootstrapResult {
  double wer = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t resamples = 0;
};

/// Linear-interpolated percentile (q in [0, 1]) of sorted values.
inline double percentile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

/// B resamples of n sentences with replacement (n next_below(n) draws per
/// resample). std_error is the sample standard deviation of the B resampled
/// WERs; the interval is their 2.5/97.5 percentiles, widened if needed so it
/// contains the full-corpus WER.
template <RandomSource R>
BootstrapResult bootstrap_wer(std::span<const ErrorCounts> counts, std::size_t resamples, R& rng) {
  if (counts.empty()) throw DataError("bootstrap needs at least one sentence");
  if (resamples < 2) throw ConfigError("bootstrap needs B >= 2");
  BootstrapResult res;
  res.wer = corpus_wer(counts);
  res.resamples = resamples;

  const std::size_t n = counts.size();
  std::vector<double> values(resamples);
  for (std::size_t b = 0; b < resamples; ++b) {
    std::uint64_t errors = 0;
    std::uint64_t words = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto& c = counts[rng.next_below(n)];
      errors += c.errors();
      words += c.ref_length();
    }
    // A resample made only of empty references has an undefined WER; count
    // it as zero errors per word rather than dividing by zero.
    values[b] = words ? static_cast<double>(errors) / static_cast<double>(words) : 0.0;
  }

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(resamples);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  res.std_error = std::sqrt(ss / static_cast<double>(resamples - 1));
  // Identical resamples can leave rounding residue in ss.
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; })) {
    res.std_error = 0.0;
  }

  std::sort(values.begin(), values.end());
  res.ci_low = std::min(percentile_sorted(values, 0.025), res.wer);
  res.ci_high = std::max(percentile_sorted(values, 0.975), res.wer);
  return res;
}

struct MapssweResult {
  double z = 0.0;
  double p = 1.0;
  std::size_t n = 0;
  double mean_diff = 0.0;
};

/// Two-sided p-value 2·(1 − Φ(|z|)) written as erfc(|z|/√2).
inline double two_sided_normal_p(double z) {
  if (std::isinf(z)) return 0.0;
  return std::erfc(std::abs(z) / std::numbers::sqrt2);
}

/// Per-segment differences d_i = errors(sys1_i) − errors(sys2_i);
/// z = mean(d) / sqrt(var(d) / n) with the n−1 variance.
inline MapssweResult mapsswe(std::span<const ErrorCounts> sys1, std::span<const ErrorCounts> sys2) {
  if (sys1.size() != sys2.size()) {
    throw DataError("mapsswe: systems have " + std::to_string(sys1.size()) + " and " +
                    std::to_string(sys2.size()) + " segments");
  }
  const std::size_t n = sys1.size();
  if (n < 2) throw DataError("mapsswe needs at least two segments");
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = static_cast<double>(sys1[i].errors()) - static_cast<double>(sys2[i].errors());
  }
  double mean = 0.0;
  for (double v : d) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(n - 1);

  MapssweResult r;
  r.n = n;
  r.mean_diff = mean;
  if (var == 0.0) {
    if (mean == 0.0) {
      r.z = 0.0;
      r.p = 1.0;
    } else {
      r.z = mean > 0 ? std::numeric_limits<double>::infinity()
                     : -std::numeric_limits<double>::infinity();
      r.p = 0.0;
    }
    return r;
  }
  r.z = mean / std::sqrt(var / static_cast<double>(n));
  r.p = two_sided_normal_p(r.z);
  return r;
}

// ---------------------------------------------------------------------------
// Transcript files: one utterance per line, "UTT_ID word1 word2 ...".
// ---------------------------------------------------------------------------

struct Utterance {
  std::string id;
  std::vector<std::string> words;
};

inline std::vector<Utterance> parse_transcripts(std::string_view text) {
  std::vector<Utterance> out;
  std::map<std::string, std::size_t> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    Utterance u;
    if (!(fields >> u.id)) continue;
    for (std::string w; fields >> w;) u.words.push_back(std::move(w));
    if (!seen.emplace(u.id, line_no).second) {
      throw FormatError("duplicate utterance id '" + u.id + "' on line " +
                        std::to_string(line_no));
    }
    out.push_back(std::move(u));
  }
  return out;
}

inline std::vector<Utterance> read_transcripts(const std::filesystem::path& path) {
  const auto bytes = io_detail::read_bytes(path);
  try {
    return parse_transcripts(
        std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

/// Aligns each reference utterance with the hypothesis of the same id, in
/// reference order. Any id present in only one file is an error listing all
/// such ids.
inline std::vector<ErrorCounts> score_utterances(const std::vector<Utterance>& ref,
                                                 const std::vector<Utterance>& hyp) {
  std::map<std::string_view, const Utterance*> by_id;
  for (const auto& h : hyp) by_id.emplace(h.id, &h);
  std::vector<std::string> missing;
  std::map<std::string_view, bool> in_ref;
  for (const auto& r : ref) {
    in_ref.emplace(r.id, true);
    if (!by_id.count(r.id)) missing.push_back(r.id + " (no hypothesis)");
  }
  for (const auto& h : hyp) {
    if (!in_ref.count(h.id)) missing.push_back(h.id + " (no reference)");
  }
  if (!missing.empty()) {
    std::string msg = "unmatched utterance ids:";
    for (const auto& id : missing) msg += " " + id;
    throw DataError(msg);
  }
  std::vector<ErrorCounts> out;
  out.reserve(ref.size());
  for (const auto& r : ref) out.push_back(align_wer(r.words, by_id.at(r.id)->words));
  return out;
}

}  // namespace augforge
