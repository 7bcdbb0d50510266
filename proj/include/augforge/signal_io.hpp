#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "augforge/error.hpp"
#include "augforge/matrix.hpp"

namespace augforge {

namespace io_detail {

inline std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed on '" + path.string() + "'");
  return bytes;
}

inline void write_bytes(const std::filesystem::path& path,
                        std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed on '" + path.string() + "'");
}

inline std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

inline std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) |
         (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xff));
  }
}

inline float get_f32(std::span<const std::uint8_t> b, std::size_t at) {
  const std::uint32_t bits = get_u32(b, at);
  float v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

inline void put_f32(std::vector<std::uint8_t>& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  put_u32(out, bits);
}

inline bool tag_is(std::span<const std::uint8_t> b, std::size_t at,
                   std::string_view tag) {
  return std::equal(tag.begin(), tag.end(), b.begin() + at,
                    [](char c, std::uint8_t u) {
                      return static_cast<std::uint8_t>(c) == u;
                    });
}

}  // namespace io_detail

// ---------------------------------------------------------------------------
// WAV
// ---------------------------------------------------------------------------

/// Decodes a RIFF/WAVE byte buffer. PCM16 and IEEE float32 are accepted
/// (plain or WAVE_FORMAT_EXTENSIBLE); channels are averaged to mono.
inline Waveform decode_wav(std::span<const std::uint8_t> b) {
  using namespace io_detail;
  if (b.size() < 12 || !tag_is(b, 0, "RIFF") || !tag_is(b, 8, "WAVE")) {
    throw FormatError("not a RIFF/WAVE stream");
  }

  bool have_fmt = false;
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
  std::span<const std::uint8_t> payload;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= b.size()) {
    const std::uint32_t chunk_size = get_u32(b, pos + 4);
    const std::size_t body = pos + 8;
    if (tag_is(b, pos, "fmt ")) {
      if (chunk_size < 16 || body + 16 > b.size()) {
        throw FormatError("truncated fmt chunk");
      }
      format = get_u16(b, body);
      channels = get_u16(b, body + 2);
      sample_rate = get_u32(b, body + 4);
      bits = get_u16(b, body + 14);
      if (format == 0xFFFE) {
        if (chunk_size < 40 || body + 26 > b.size()) {
          throw FormatError("truncated WAVE_FORMAT_EXTENSIBLE header");
        }
        format = get_u16(b, body + 24);
      }
      have_fmt = true;
    } else if (tag_is(b, pos, "data")) {
      if (body + chunk_size > b.size()) {
        throw FormatError("data chunk extends past end of file");
      }
      payload = b.subspan(body, chunk_size);
      have_data = true;
      break;
    }
    pos = body + chunk_size + (chunk_size & 1u);
  }
  if (!have_fmt) throw FormatError("missing fmt chunk");
  if (!have_data) throw FormatError("missing data chunk");
  if (channels == 0) throw FormatError("zero channels");
  if (sample_rate == 0) throw FormatError("zero sample rate");

  std::size_t bytes_per_sample = 0;
  if (format == 1 && bits == 16) {
    bytes_per_sample = 2;
  } else if (format == 3 && bits == 32) {
    bytes_per_sample = 4;
  } else {
    throw UnsupportedError("unsupported WAV encoding (format " +
                           std::to_string(format) + ", " +
                           std::to_string(bits) + " bits)");
  }

  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t n = payload.size() / frame_bytes;
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const std::size_t at = i * frame_bytes + c * bytes_per_sample;
      if (bytes_per_sample == 2) {
        acc += static_cast<std::int16_t>(get_u16(payload, at)) / 32768.0;
      } else {
        acc += get_f32(payload, at);
      }
    }
    const float v = static_cast<float>(acc / channels);
    if (!std::isfinite(v)) throw FormatError("non-finite sample in WAV data");
    w.samples[i] = v;
  }
  return w;
}

/// Encodes as mono PCM16. Samples are scaled by 32768, rounded and clipped.
inline std::vector<std::uint8_t> encode_wav(const Waveform& w) {
  using namespace io_detail;
  const auto data_bytes = static_cast<std::uint32_t>(w.samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  for (char c : std::string_view("RIFF")) out.push_back(static_cast<std::uint8_t>(c));
  put_u32(out, 36 + data_bytes);
  for (char c : std::string_view("WAVEfmt ")) out.push_back(static_cast<std::uint8_t>(c));
  put_u32(out, 16);
  put_u16(out, 1);
  put_u16(out, 1);
  put_u32(out, w.sample_rate);
  put_u32(out, w.sample_rate * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  for (char c : std::string_view("data")) out.push_back(static_cast<std::uint8_t>(c));
  put_u32(out, data_bytes);
  for (float s : w.samples) {
    if (!std::isfinite(s)) throw DataError("cannot encode non-finite sample");
    const double q = std::clamp(std::round(static_cast<double>(s) * 32768.0),
                                -32768.0, 32767.0);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  return out;
}

inline Waveform read_wav(const std::filesystem::path& path) {
  try {
    return decode_wav(io_detail::read_bytes(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const UnsupportedError& e) {
    throw UnsupportedError(path.string() + ": " + e.what());
  }
}

inline void write_wav(const std::filesystem::path& path, const Waveform& w) {
  io_detail::write_bytes(path, encode_wav(w));
}

// ---------------------------------------------------------------------------
// SPGM: "SPGM" | u32 version=1 | u32 n_frames | u32 n_bins | f32 LE data
// ---------------------------------------------------------------------------

inline constexpr std::uint32_t kSpgmVersion = 1;
inline constexpr std::size_t kSpgmHeaderBytes = 16;

inline std::vector<std::uint8_t> encode_spgm(const Matrix& m) {
  using namespace io_detail;
  if (m.n_frames() > std::numeric_limits<std::uint32_t>::max() ||
      m.n_bins() > std::numeric_limits<std::uint32_t>::max()) {
    throw DataError("matrix too large for SPGM");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kSpgmHeaderBytes + m.size() * 4);
  for (char c : std::string_view("SPGM")) out.push_back(static_cast<std::uint8_t>(c));
  put_u32(out, kSpgmVersion);
  put_u32(out, static_cast<std::uint32_t>(m.n_frames()));
  put_u32(out, static_cast<std::uint32_t>(m.n_bins()));
  for (float v : m.data()) put_f32(out, v);
  return out;
}

inline Matrix decode_spgm(std::span<const std::uint8_t> b) {
  using namespace io_detail;
  if (b.size() < kSpgmHeaderBytes || !tag_is(b, 0, "SPGM")) {
    throw FormatError("bad SPGM magic");
  }
  const std::uint32_t version = get_u32(b, 4);
  if (version != kSpgmVersion) {
    throw FormatError("unsupported SPGM version " + std::to_string(version));
  }
  const std::uint64_t frames = get_u32(b, 8);
  const std::uint64_t bins = get_u32(b, 12);
  const std::uint64_t expected = kSpgmHeaderBytes + frames * bins * 4;
  if (b.size() != expected) {
    throw FormatError("SPGM header claims " + std::to_string(frames) + "x" +
                      std::to_string(bins) + " but payload is " +
                      std::to_string(b.size() - kSpgmHeaderBytes) + " bytes");
  }
  std::vector<float> data(frames * bins);
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = get_f32(b, kSpgmHeaderBytes + 4 * i);
  }
  return Matrix(frames, bins, std::move(data));
}

inline Matrix read_spgm(const std::filesystem::path& path) {
  try {
    return decode_spgm(io_detail::read_bytes(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

inline void write_spgm(const std::filesystem::path& path, const Matrix& m) {
  io_detail::write_bytes(path, encode_spgm(m));
}

// ---------------------------------------------------------------------------
// CSV: one frame per line, comma-separated decimal floats.
// ---------------------------------------------------------------------------

inline Matrix parse_csv_matrix(std::string_view text) {
  std::vector<float> data;
  std::size_t n_bins = 0;
  std::size_t n_frames = 0;
  std::size_t line_no = 0;

  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
      s.remove_suffix(1);
    }
    return s;
  };

  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;

    std::size_t cells = 0;
    while (true) {
      const auto comma = line.find(',');
      std::string_view cell = trim(line.substr(0, comma));
      if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
      float v = 0.0f;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() ||
          !std::isfinite(v)) {
        throw FormatError("line " + std::to_string(line_no) + ": bad number '" +
                          std::string(cell) + "'");
      }
      data.push_back(v);
      ++cells;
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (n_frames == 0) {
      n_bins = cells;
    } else if (cells != n_bins) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(n_bins) + " columns, got " +
                        std::to_string(cells));
    }
    ++n_frames;
  }
  return Matrix(n_frames, n_bins, std::move(data));
}

inline std::string format_csv_matrix(const Matrix& m) {
  std::string out;
  std::array<char, 32> buf{};
  for (std::size_t f = 0; f < m.n_frames(); ++f) {
    for (std::size_t b = 0; b < m.n_bins(); ++b) {
      if (b) out.push_back(',');
      const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), m(f, b));
      out.append(buf.data(), ptr);
    }
    out.push_back('\n');
  }
  return out;
}

inline Matrix read_csv_matrix(const std::filesystem::path& path) {
  const auto bytes = io_detail::read_bytes(path);
  try {
    return parse_csv_matrix(std::string_view(
        reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

inline void write_csv_matrix(const std::filesystem::path& path, const Matrix& m) {
  const std::string text = format_csv_matrix(m);
  io_detail::write_bytes(
      path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace augforge
