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

#ifndef PROBSEG_DOMAIN_HPP
#define PROBSEG_DOMAIN_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace probseg {

/// Rectangular pixel grid of rank 1, 2, or 3. Pixels are stored row-major
/// with the first extent varying slowest and the last extent fastest.
class PixelDomain {
 public:
  explicit PixelDomain(std::vector<std::size_t> extents)
      : extents_(std::move(extents)) {
    if (extents_.empty() || extents_.size() > 3) {
      throw std::invalid_argument("PixelDomain: rank must be 1, 2, or 3");
    }
    pixel_count_ = 1;
    for (std::size_t e : extents_) {
      if (e == 0) {
        throw std::invalid_argument("PixelDomain: every extent must be >= 1");
      }
      pixel_count_ *= e;
    }
  }

  std::size_t rank() const { return extents_.size(); }
  std::size_t extent(std::size_t axis) const { return extents_.at(axis); }
  const std::vector<std::size_t>& extents() const { return extents_; }
  std::size_t pixel_count() const { return pixel_count_; }

  /// Length of one text-grid row: the fastest-varying extent.
  std::size_t row_length() const { return extents_.back(); }

  /// Row-major linear index of a coordinate tuple.
  std::size_t index_of(std::span<const std::size_t> coords) const {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < extents_.size(); ++a) {
      idx = idx * extents_[a] + coords[a];
    }
    return idx;
  }

  /// Inverse of index_of; writes rank() coordinates into `coords`.
  void coords_of(std::size_t index, std::span<std::size_t> coords) const {
    for (std::size_t a = extents_.size(); a-- > 0;) {
      coords[a] = index % extents_[a];
      index /= extents_[a];
    }
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t a = 0; a < extents_.size(); ++a) {
      if (a > 0) s += 'x';
      s += std::to_string(extents_[a]);
    }
    return s;
  }

  friend bool operator==(const PixelDomain&, const PixelDomain&) = default;

 private:
  std::vector<std::size_t> extents_;
  std::size_t pixel_count_;
};

/// Ordered set of distinct non-negative integer region labels. The list
/// order fixes the channel order of probabilistic segmentations; the label
/// values themselves carry identity and need not be contiguous.
class LabelSet {
 public:
  explicit LabelSet(std::vector<int> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) {
      throw std::invalid_argument("LabelSet: at least one label required");
    }
    for (int l : labels_) {
      if (l < 0) {
        throw std::invalid_argument("LabelSet: labels must be non-negative");
      }
    }
    std::vector<int> sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("LabelSet: labels must be distinct");
    }
  }

  std::size_t size() const { return labels_.size(); }
  int label_at(std::size_t position) const { return labels_.at(position); }
  const std::vector<int>& labels() const { return labels_; }

  std::optional<std::size_t> position_of(int label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] == label) return i;
    }
    return std::nullopt;
  }

  bool contains(int label) const { return position_of(label).has_value(); }

  /// Set equality, ignoring order.
  bool same_labels(const LabelSet& other) const {
    if (labels_.size() != other.labels_.size()) return false;
    std::vector<int> a = labels_, b = other.labels_;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
  }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (i > 0) s += ',';
      s += std::to_string(labels_[i]);
    }
    return s + "}";
  }

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::vector<int> labels_;
};

}  // namespace probseg

#endif  // PROBSEG_DOMAIN_HPP
