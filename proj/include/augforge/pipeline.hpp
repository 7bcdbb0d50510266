#pragma once

// JSON-configured augmentation pipelines:
//   {"seed": u64, "pipeline": [{"op": name, ...params}, ...]}
// Ops run in order and share one RandomSource. Each op's draw order is fixed
// (see the comments on the op structs) so runs are reproducible.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "augforge/augment.hpp"
#include "augforge/error.hpp"
#include "augforge/random.hpp"

namespace augforge {

namespace ops {

struct SpliceOut {
  SpliceConfig cfg{2, 40, 1};
};

struct TimeMask {
  SpliceConfig cfg{2, 40, 0};
  FillPolicy fill = FillPolicy::zero();
};

struct FreqMask {
  SpliceConfig cfg{2, 8, 0};
  FillPolicy fill = FillPolicy::zero();
};

/// Token-aligned splice or mask. Tokens come from explicit `spans`, or when
/// none are given, from cutting the input into pieces of `token_len` frames.
struct Semantic {
  bool splice = true;
  double ratio = 0.15;
  std::vector<TokenSpan> spans;
  std::size_t token_len = 0;
  FillPolicy fill = FillPolicy::zero();
  std::size_t min_retained = 1;
};

/// Draws: partner index (only when a partner pool is supplied), then λ from
/// Beta(α, α) unless `lambda` is fixed.
struct Mixup {
  double alpha = 1.0;
  std::optional<double> lambda;
};

/// Draws: partner index (pool only), then one time interval with max width
/// `max_time` and one bin interval with max width `max_freq`, each sampled
/// like a single mask.
struct Cutmix {
  std::size_t max_time = 40;
  std::size_t max_freq = 8;
};

struct TimeWarp {
  std::size_t max_shift = 5;
};

struct Fade {
  double max_fraction = 0.5;
};

/// Draws one next_below(factors.size()) to choose a factor when more than
/// one is listed.
struct SpeedPerturb {
  std::vector<double> factors{0.9, 1.0, 1.1};
};

struct SpliceOutWave {
  SpliceConfig cfg{2, 1600, 1};
};

}  // namespace ops

using OpConfig = std::variant<ops::SpliceOut, ops::TimeMask, ops::FreqMask, ops::Semantic,
                              ops::Mixup, ops::Cutmix, ops::TimeWarp, ops::Fade,
                              ops::SpeedPerturb, ops::SpliceOutWave>;

struct PipelineConfig {
  std::uint64_t seed = 0;
  std::vector<OpConfig> pipeline;
};

namespace pipeline_detail {

using nlohmann::json;

class OpReader {
 public:
  OpReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  std::string key(const std::string& k) const { return path_ + "." + k; }

  std::size_t count(const char* k, std::size_t fallback, std::size_t min = 0) {
    seen_.push_back(k);
    if (!node_.contains(k)) return fallback;
    const auto& v = node_.at(k);
    if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min)) {
      throw ConfigError(key(k) + ": expected integer >= " + std::to_string(min));
    }
    return v.get<std::size_t>();
  }

  double number(const char* k, double fallback) {
    seen_.push_back(k);
    if (!node_.contains(k)) return fallback;
    const auto& v = node_.at(k);
    if (!v.is_number()) throw ConfigError(key(k) + ": expected number");
    return v.get<double>();
  }

  std::optional<double> optional_number(const char* k) {
    if (!node_.contains(k)) {
      seen_.push_back(k);
      return std::nullopt;
    }
    return number(k, 0.0);
  }

  FillPolicy fill(FillPolicy fallback) {
    seen_.push_back("fill");
    if (!node_.contains("fill")) return fallback;
    const auto& v = node_.at("fill");
    if (v.is_string() && v == "zero") return FillPolicy::zero();
    if (v.is_string() && v == "mean") return FillPolicy::global_mean();
    if (v.is_number()) {
      const auto f = v.get<double>();
      if (std::isfinite(f)) return FillPolicy::constant(static_cast<float>(f));
    }
    throw ConfigError(key("fill") + ": expected \"zero\", \"mean\" or a finite number");
  }

  std::vector<double> numbers(const char* k, std::vector<double> fallback) {
    seen_.push_back(k);
    if (!node_.contains(k)) return fallback;
    const auto& v = node_.at(k);
    if (!v.is_array() || v.empty()) throw ConfigError(key(k) + ": expected non-empty array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        throw ConfigError(key(k) + "[" + std::to_string(i) + "]: expected number");
      }
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  std::vector<TokenSpan> spans(const char* k) {
    seen_.push_back(k);
    std::vector<TokenSpan> out;
    if (!node_.contains(k)) return out;
    const auto& v = node_.at(k);
    if (!v.is_array()) throw ConfigError(key(k) + ": expected array of [start, end]");
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto& s = v[i];
      const std::string at = key(k) + "[" + std::to_string(i) + "]";
      if (!s.is_array() || s.size() != 2 || !s[0].is_number_unsigned() ||
          !s[1].is_number_unsigned() || s[0].get<std::size_t>() > s[1].get<std::size_t>()) {
        throw ConfigError(at + ": expected [start, end] with 0 <= start <= end");
      }
      out.push_back({s[0].get<std::size_t>(), s[1].get<std::size_t>(), static_cast<long>(i)});
    }
    return out;
  }

  void reject_unknown() const {
    for (const auto& [k, v] : node_.items()) {
      if (k == "op") continue;
      if (std::find(seen_.begin(), seen_.end(), k) == seen_.end()) {
        throw ConfigError(key(k) + ": unknown parameter");
      }
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::vector<std::string> seen_;
};

inline SpliceConfig read_intervals(OpReader& r, SpliceConfig d) {
  d.n_intervals = r.count("n", d.n_intervals);
  d.max_width = r.count("t", d.max_width, 1);
  return d;
}

inline OpConfig parse_op(const json& node, const std::string& path) {
  if (!node.is_object()) throw ConfigError(path + ": expected object");
  if (!node.contains("op") || !node.at("op").is_string()) {
    throw ConfigError(path + ".op: missing or not a string");
  }
  const auto name = node.at("op").get<std::string>();
  OpReader r(node, path);
  OpConfig out;

  if (name == "splice_out" || name == "splice_out_wave") {
    SpliceConfig d = name == "splice_out" ? ops::SpliceOut{}.cfg : ops::SpliceOutWave{}.cfg;
    d = read_intervals(r, d);
    d.min_retained = r.count("min_retained", d.min_retained);
    if (name == "splice_out") {
      out = ops::SpliceOut{d};
    } else {
      out = ops::SpliceOutWave{d};
    }
  } else if (name == "time_mask") {
    ops::TimeMask op;
    op.cfg = read_intervals(r, op.cfg);
    op.fill = r.fill(op.fill);
    out = op;
  } else if (name == "freq_mask") {
    ops::FreqMask op;
    op.cfg = read_intervals(r, op.cfg);
    op.fill = r.fill(op.fill);
    out = op;
  } else if (name == "semantic_splice" || name == "semantic_mask") {
    ops::Semantic op;
    op.splice = name == "semantic_splice";
    op.ratio = r.number("ratio", op.ratio);
    if (!(op.ratio >= 0.0 && op.ratio <= 1.0)) throw ConfigError(r.key("ratio") + ": must be in [0, 1]");
    op.spans = r.spans("spans");
    op.token_len = r.count("token_len", 0);
    if (op.spans.empty() && op.token_len == 0) {
      throw ConfigError(path + ": semantic ops need \"spans\" or \"token_len\"");
    }
    op.fill = r.fill(op.fill);
    op.min_retained = r.count("min_retained", op.min_retained);
    out = op;
  } else if (name == "mixup") {
    ops::Mixup op;
    op.alpha = r.number("alpha", op.alpha);
    if (!(op.alpha > 0.0)) throw ConfigError(r.key("alpha") + ": must be positive");
    op.lambda = r.optional_number("lambda");
    if (op.lambda && !(*op.lambda >= 0.0 && *op.lambda <= 1.0)) {
      throw ConfigError(r.key("lambda") + ": must be in [0, 1]");
    }
    out = op;
  } else if (name == "cutmix") {
    ops::Cutmix op;
    op.max_time = r.count("t", op.max_time, 1);
    op.max_freq = r.count("f", op.max_freq, 1);
    out = op;
  } else if (name == "time_warp") {
    out = ops::TimeWarp{r.count("w", 5)};
  } else if (name == "fade") {
    ops::Fade op;
    op.max_fraction = r.number("max_fraction", op.max_fraction);
    if (!(op.max_fraction > 0.0 && op.max_fraction <= 0.5)) {
      throw ConfigError(r.key("max_fraction") + ": must be in (0, 0.5]");
    }
    out = op;
  } else if (name == "speed_perturb") {
    ops::SpeedPerturb op;
    if (node.contains("factor")) {
      op.factors = {r.number("factor", 1.0)};
    } else {
      r.number("factor", 1.0);
    }
    op.factors = r.numbers("factors", op.factors);
    for (double f : op.factors) {
      if (!(f > 0.0)) throw ConfigError(path + ": speed factors must be positive");
    }
    out = op;
  } else {
    throw ConfigError(path + ".op: unknown op \"" + name + "\"");
  }
  r.reject_unknown();
  return out;
}

}  // namespace pipeline_detail

inline PipelineConfig parse_pipeline(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("$: expected a JSON object");
  PipelineConfig cfg;
  for (const auto& [k, v] : doc.items()) {
    if (k != "seed" && k != "pipeline") throw ConfigError("$." + k + ": unknown key");
  }
  if (doc.contains("seed")) {
    const auto& s = doc.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      throw ConfigError("$.seed: expected unsigned 64-bit integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }
  if (!doc.contains("pipeline")) throw ConfigError("$.pipeline: missing");
  const auto& list = doc.at("pipeline");
  if (!list.is_array()) throw ConfigError("$.pipeline: expected array");
  for (std::size_t i = 0; i < list.size(); ++i) {
    cfg.pipeline.push_back(
        pipeline_detail::parse_op(list[i], "$.pipeline[" + std::to_string(i) + "]"));
  }
  return cfg;
}

inline PipelineConfig parse_pipeline_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  return parse_pipeline(doc);
}

namespace pipeline_detail {

inline const Matrix& need_spectrogram(const LabeledSample& s, const char* op) {
  if (const auto* m = std::get_if<Matrix>(&s.features)) return *m;
  throw ConfigError(std::string(op) + " needs a spectrogram input, got a waveform");
}

inline const Waveform& need_waveform(const LabeledSample& s, const char* op) {
  if (const auto* w = std::get_if<Waveform>(&s.features)) return *w;
  throw ConfigError(std::string(op) + " needs a waveform input, got a spectrogram");
}

inline std::vector<TokenSpan> fixed_tokens(std::size_t n_frames, std::size_t token_len) {
  std::vector<TokenSpan> out;
  for (std::size_t s = 0, id = 0; s < n_frames; s += token_len, ++id) {
    out.push_back({s, std::min(s + token_len, n_frames), static_cast<long>(id)});
  }
  return out;
}

template <RandomSource R>
const LabeledSample& pick_partner(R& rng, const LabeledSample& self,
                                  std::span<const LabeledSample> pool) {
  if (pool.empty()) return self;
  return pool[rng.next_below(pool.size())];
}

template <RandomSource R>
struct Runner {
  R& rng;
  LabeledSample& sample;
  std::span<const LabeledSample> pool;

  void operator()(const ops::SpliceOut& op) {
    sample.features = splice_out(rng, need_spectrogram(sample, "splice_out"), op.cfg);
  }
  void operator()(const ops::TimeMask& op) {
    sample.features = time_mask(rng, need_spectrogram(sample, "time_mask"), op.cfg, op.fill);
  }
  void operator()(const ops::FreqMask& op) {
    sample.features = freq_mask(rng, need_spectrogram(sample, "freq_mask"), op.cfg, op.fill);
  }
  void operator()(const ops::Semantic& op) {
    const char* name = op.splice ? "semantic_splice" : "semantic_mask";
    const Matrix& m = need_spectrogram(sample, name);
    const auto spans = op.spans.empty() ? fixed_tokens(m.n_frames(), op.token_len) : op.spans;
    validate_spans(spans, m.n_frames());
    const auto iv = semantic_intervals(rng, std::span<const TokenSpan>(spans), op.ratio);
    if (op.splice) {
      sample.features = apply_splice(m, iv, op.min_retained);
    } else {
      sample.features = apply_mask(m, iv, op.fill, Axis::kTime);
    }
  }
  void operator()(const ops::Mixup& op) {
    const LabeledSample partner = pick_partner(rng, sample, pool);
    const double lambda = op.lambda ? *op.lambda : sample_beta(rng, op.alpha);
    sample = mixup(sample, partner, lambda);
  }
  void operator()(const ops::Cutmix& op) {
    const Matrix& m = need_spectrogram(sample, "cutmix");
    const LabeledSample partner = pick_partner(rng, sample, pool);
    if (m.n_frames() == 0 || m.n_bins() == 0) return;
    const auto t = sample_intervals(rng, m.n_frames(), {1, op.max_time, 0});
    const auto f = sample_intervals(rng, m.n_bins(), {1, op.max_freq, 0});
    sample = cutmix(sample, partner, Rect{t.intervals()[0], f.intervals()[0]});
  }
  void operator()(const ops::TimeWarp& op) {
    sample.features = time_warp(rng, need_spectrogram(sample, "time_warp"), op.max_shift);
  }
  void operator()(const ops::Fade& op) {
    sample.features = fade(rng, need_waveform(sample, "fade"), op.max_fraction);
  }
  void operator()(const ops::SpeedPerturb& op) {
    const Waveform& w = need_waveform(sample, "speed_perturb");
    const double factor =
        op.factors.size() == 1 ? op.factors[0] : op.factors[rng.next_below(op.factors.size())];
    sample.features = speed_perturb(w, factor);
  }
  void operator()(const ops::SpliceOutWave& op) {
    sample.features = splice_out_wave(rng, need_waveform(sample, "splice_out_wave"), op.cfg);
  }
};

}  // namespace pipeline_detail

/// Applies `pipeline` in order. Mixing ops draw their partner from `pool`, or
/// mix the sample with itself when the pool is empty.
template <RandomSource R>
LabeledSample apply_pipeline(R& rng, LabeledSample sample, std::span<const OpConfig> pipeline,
                             std::span<const LabeledSample> pool = {}) {
  for (const auto& op : pipeline) {
    std::visit(pipeline_detail::Runner<R>{rng, sample, pool}, op);
  }
  return sample;
}

}  // namespace augforge
