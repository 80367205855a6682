// Copyright 2026 The Probseg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// File codecs for probability volumes (PROBSEG v1), crisp label maps
// (LABELMAP v1) and similarity maps (SIMMAP v1). The formats are
// self-describing single files with a text header; see docs/formats.md for
// the byte-exact layout. All writers are atomic: content goes to a
// temporary sibling that is renamed over the target only on success.

#ifndef PROBSEG_IO_HPP
#define PROBSEG_IO_HPP

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "probseg/errors.hpp"
#include "probseg/format.hpp"
#include "probseg/metrics.hpp"
#include "probseg/segmentation.hpp"

namespace probseg {

enum class VolumeEncoding { binary, text };

struct ReadOptions {
  bool normalize = false;  // rescale near-valid pixels instead of failing
  bool validate = true;    // reject files whose vectors violate invariants
};

namespace detail {

inline void atomic_write(const std::filesystem::path& path,
                         std::string_view content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

inline std::uint64_t byteswap64(std::uint64_t v) {
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) {
    r = (r << 8) | ((v >> (8 * i)) & 0xffu);
  }
  return r;
}

inline void append_double_le(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  if constexpr (std::endian::native == std::endian::big) {
    bits = byteswap64(bits);
  }
  char raw[8];
  std::memcpy(raw, &bits, sizeof raw);
  out.append(raw, sizeof raw);
}

inline double read_double_le(const char* raw) {
  std::uint64_t bits;
  std::memcpy(&bits, raw, sizeof bits);
  if constexpr (std::endian::native == std::endian::big) {
    bits = byteswap64(bits);
  }
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

/// Reads one header line, tracking the 1-based line number for messages.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::string next(const char* what) {
    std::string line;
    if (!std::getline(in_, line)) {
      throw parse_error("line " + std::to_string(line_no_ + 1) +
                        ": unexpected end of file, expected " +
                        std::string(what));
    }
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

inline std::string expect_prefix(const std::string& line,
                                 const std::string& prefix,
                                 std::size_t line_no) {
  if (line.rfind(prefix, 0) != 0) {
    throw parse_error("line " + std::to_string(line_no) + ": expected '" +
                      prefix + "...', got '" + line + "'");
  }
  return line.substr(prefix.size());
}

inline std::vector<std::size_t> parse_extents(const std::string& text,
                                              std::size_t line_no) {
  std::istringstream ss(text);
  std::vector<std::size_t> extents;
  long long v = 0;
  while (ss >> v) {
    if (v <= 0) {
      throw parse_error("line " + std::to_string(line_no) +
                        ": extents must be positive");
    }
    extents.push_back(static_cast<std::size_t>(v));
  }
  if (!ss.eof()) {
    throw parse_error("line " + std::to_string(line_no) +
                      ": malformed extent token");
  }
  if (extents.empty() || extents.size() > 3) {
    throw parse_error("line " + std::to_string(line_no) +
                      ": shape must list 1 to 3 extents");
  }
  return extents;
}

inline std::vector<int> parse_labels(const std::string& text,
                                     std::size_t line_no) {
  std::istringstream ss(text);
  std::vector<int> labels;
  long long v = 0;
  while (ss >> v) {
    if (v < 0) {
      throw parse_error("line " + std::to_string(line_no) +
                        ": negative label " + std::to_string(v));
    }
    labels.push_back(static_cast<int>(v));
  }
  if (!ss.eof()) {
    throw parse_error("line " + std::to_string(line_no) +
                      ": malformed label token");
  }
  if (labels.empty()) {
    throw parse_error("line " + std::to_string(line_no) + ": no labels listed");
  }
  return labels;
}

inline double parse_double_token(const std::string& token,
                                 std::size_t line_no) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + token.size() || token.empty()) {
    throw parse_error("line " + std::to_string(line_no) +
                      ": malformed number '" + token + "'");
  }
  return v;
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  return in;
}

}  // namespace detail

inline constexpr std::string_view kProbVolumeMagic = "PROBSEG v1";
inline constexpr std::string_view kLabelMapMagic = "LABELMAP v1";
inline constexpr std::string_view kSimilarityMapMagic = "SIMMAP v1";

enum class SegmentationFileKind { prob_volume, label_map, similarity_map };

/// Peeks at the magic line to identify a file.
inline SegmentationFileKind detect_file_kind(
    const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  std::string magic;
  std::getline(in, magic);
  if (!magic.empty() && magic.back() == '\r') magic.pop_back();
  if (magic == kProbVolumeMagic) return SegmentationFileKind::prob_volume;
  if (magic == kLabelMapMagic) return SegmentationFileKind::label_map;
  if (magic == kSimilarityMapMagic) return SegmentationFileKind::similarity_map;
  throw parse_error(path.string() + ": unrecognized magic line '" + magic + "'");
}

inline void write_prob_volume(const ProbSegmentation& seg,
                              const std::filesystem::path& path,
                              VolumeEncoding encoding) {
  std::string out;
  out += kProbVolumeMagic;
  out += "\nshape:";
  for (std::size_t e : seg.domain().extents()) {
    out += ' ';
    out += std::to_string(e);
  }
  out += "\nlabels:";
  for (int l : seg.labels().labels()) {
    out += ' ';
    out += std::to_string(l);
  }
  out += "\nencoding: ";
  out += encoding == VolumeEncoding::binary ? "binary" : "text";
  out += "\ndata:\n";
  const std::size_t n = seg.domain().pixel_count();
  const std::size_t L = seg.label_count();
  if (encoding == VolumeEncoding::binary) {
    out.reserve(out.size() + n * L * 8);
    for (double v : seg.values()) detail::append_double_le(out, v);
  } else {
    for (std::size_t px = 0; px < n; ++px) {
      const auto p = seg.pixel(px);
      for (std::size_t c = 0; c < L; ++c) {
        if (c > 0) out += ' ';
        out += detail::format_double(p[c]);
      }
      out += '\n';
    }
  }
  detail::atomic_write(path, out);
}

inline ProbSegmentation read_prob_volume(const std::filesystem::path& path,
                                         ReadOptions options = {}) {
  auto in = detail::open_input(path);
  detail::LineReader lines(in);
  const std::string magic = lines.next("magic line");
  if (magic != kProbVolumeMagic) {
    throw parse_error(path.string() + ": not a probability volume (magic '" +
                      magic + "')");
  }
  const auto extents = detail::parse_extents(
      detail::expect_prefix(lines.next("shape"), "shape:", lines.line_no()),
      lines.line_no());
  const auto labels = detail::parse_labels(
      detail::expect_prefix(lines.next("labels"), "labels:", lines.line_no()),
      lines.line_no());
  std::string encoding_token = detail::expect_prefix(
      lines.next("encoding"), "encoding:", lines.line_no());
  while (!encoding_token.empty() && encoding_token.front() == ' ') {
    encoding_token.erase(encoding_token.begin());
  }
  if (encoding_token != "binary" && encoding_token != "text") {
    throw parse_error("line " + std::to_string(lines.line_no()) +
                      ": unknown encoding '" + encoding_token + "'");
  }
  const std::string data_line = lines.next("data:");
  if (data_line != "data:") {
    throw parse_error("line " + std::to_string(lines.line_no()) +
                      ": expected 'data:', got '" + data_line + "'");
  }

  PixelDomain domain(extents);
  LabelSet label_set(labels);
  const std::size_t n = domain.pixel_count();
  const std::size_t L = label_set.size();
  std::vector<double> values;
  values.reserve(n * L);

  if (encoding_token == "binary") {
    std::vector<char> raw(n * L * 8);
    in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
    const std::size_t got = static_cast<std::size_t>(in.gcount());
    if (got != raw.size()) {
      throw parse_error(path.string() + ": binary payload holds " +
                        std::to_string(got / 8) + " values, header promises " +
                        std::to_string(n * L));
    }
    char extra;
    if (in.read(&extra, 1)) {
      throw parse_error(path.string() + ": trailing bytes after payload");
    }
    for (std::size_t i = 0; i < n * L; ++i) {
      values.push_back(detail::read_double_le(raw.data() + i * 8));
    }
  } else {
    for (std::size_t px = 0; px < n; ++px) {
      std::string line;
      if (!std::getline(in, line)) {
        throw parse_error(path.string() + ": payload holds " +
                          std::to_string(px) + " pixel rows, header promises " +
                          std::to_string(n));
      }
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const std::size_t line_no = lines.line_no() + px + 1;
      std::istringstream ss(line);
      std::string token;
      std::size_t count = 0;
      while (ss >> token) {
        values.push_back(detail::parse_double_token(token, line_no));
        ++count;
      }
      if (count != L) {
        throw parse_error("line " + std::to_string(line_no) + ": expected " +
                          std::to_string(L) + " values, got " +
                          std::to_string(count));
      }
    }
    std::string trailing;
    while (std::getline(in, trailing)) {
      if (!trailing.empty() && trailing.back() == '\r') trailing.pop_back();
      if (!trailing.empty()) {
        throw parse_error(path.string() + ": trailing content after payload");
      }
    }
  }

  ProbSegmentation seg{std::move(domain), std::move(label_set),
                       std::move(values)};
  if (options.normalize) {
    seg = normalized(seg);
  }
  if (options.validate) {
    const auto violations = validate(seg);
    if (!violations.empty()) {
      throw validation_error(path.string() + ": " + violations.front().message() +
                             (violations.size() > 1
                                  ? " (+" + std::to_string(violations.size() - 1) +
                                        " more)"
                                  : ""));
    }
  }
  return seg;
}

inline void write_label_map(const CrispSegmentation& seg,
                            const std::filesystem::path& path) {
  std::string out;
  out += kLabelMapMagic;
  out += "\nshape:";
  for (std::size_t e : seg.domain().extents()) {
    out += ' ';
    out += std::to_string(e);
  }
  out += '\n';
  const std::size_t row = seg.domain().row_length();
  const std::size_t n = seg.domain().pixel_count();
  for (std::size_t px = 0; px < n; ++px) {
    out += std::to_string(seg.label(px));
    out += (px % row + 1 == row) ? '\n' : ' ';
  }
  detail::atomic_write(path, out);
}

/// Reads a crisp label map. The label set is the sorted set of labels
/// present in the grid.
inline CrispSegmentation read_label_map(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  detail::LineReader lines(in);
  const std::string magic = lines.next("magic line");
  if (magic != kLabelMapMagic) {
    throw parse_error(path.string() + ": not a label map (magic '" + magic +
                      "')");
  }
  const auto extents = detail::parse_extents(
      detail::expect_prefix(lines.next("shape"), "shape:", lines.line_no()),
      lines.line_no());
  PixelDomain domain(extents);
  const std::size_t rows = domain.pixel_count() / domain.row_length();
  std::vector<int> assignment;
  assignment.reserve(domain.pixel_count());
  for (std::size_t r = 0; r < rows; ++r) {
    std::string line;
    if (!std::getline(in, line)) {
      throw parse_error(path.string() + ": grid holds " + std::to_string(r) +
                        " rows, header promises " + std::to_string(rows));
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t line_no = lines.line_no() + r + 1;
    std::istringstream ss(line);
    long long v = 0;
    std::size_t count = 0;
    while (ss >> v) {
      if (v < 0) {
        throw parse_error("line " + std::to_string(line_no) +
                          ": negative label " + std::to_string(v));
      }
      assignment.push_back(static_cast<int>(v));
      ++count;
    }
    if (!ss.eof()) {
      throw parse_error("line " + std::to_string(line_no) +
                        ": non-integer token in row");
    }
    if (count != domain.row_length()) {
      throw parse_error("line " + std::to_string(line_no) + ": row has " +
                        std::to_string(count) + " labels, expected " +
                        std::to_string(domain.row_length()));
    }
  }
  std::string trailing;
  while (std::getline(in, trailing)) {
    if (!trailing.empty() && trailing.back() == '\r') trailing.pop_back();
    if (!trailing.empty()) {
      throw parse_error(path.string() + ": trailing content after grid");
    }
  }
  std::vector<int> labels = assignment;
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return {std::move(domain), LabelSet(std::move(labels)), std::move(assignment)};
}

inline void write_similarity_map(const SimilarityMap& map,
                                 const std::filesystem::path& path) {
  std::string out;
  out += kSimilarityMapMagic;
  out += "\nshape:";
  for (std::size_t e : map.domain.extents()) {
    out += ' ';
    out += std::to_string(e);
  }
  out += '\n';
  const std::size_t row = map.domain.row_length();
  for (std::size_t px = 0; px < map.values.size(); ++px) {
    out += detail::format_double(map.values[px]);
    out += (px % row + 1 == row) ? '\n' : ' ';
  }
  detail::atomic_write(path, out);
}

inline SimilarityMap read_similarity_map(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  detail::LineReader lines(in);
  const std::string magic = lines.next("magic line");
  if (magic != kSimilarityMapMagic) {
    throw parse_error(path.string() + ": not a similarity map (magic '" +
                      magic + "')");
  }
  const auto extents = detail::parse_extents(
      detail::expect_prefix(lines.next("shape"), "shape:", lines.line_no()),
      lines.line_no());
  PixelDomain domain(extents);
  const std::size_t rows = domain.pixel_count() / domain.row_length();
  std::vector<double> values;
  values.reserve(domain.pixel_count());
  for (std::size_t r = 0; r < rows; ++r) {
    std::string line;
    if (!std::getline(in, line)) {
      throw parse_error(path.string() + ": grid holds " + std::to_string(r) +
                        " rows, header promises " + std::to_string(rows));
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t line_no = lines.line_no() + r + 1;
    std::istringstream ss(line);
    std::string token;
    std::size_t count = 0;
    while (ss >> token) {
      values.push_back(detail::parse_double_token(token, line_no));
      ++count;
    }
    if (count != domain.row_length()) {
      throw parse_error("line " + std::to_string(line_no) + ": row has " +
                        std::to_string(count) + " values, expected " +
                        std::to_string(domain.row_length()));
    }
  }
  return {std::move(domain), std::move(values)};
}

}  // namespace probseg

#endif  // PROBSEG_IO_HPP
