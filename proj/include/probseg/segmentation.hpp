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

#ifndef PROBSEG_SEGMENTATION_HPP
#define PROBSEG_SEGMENTATION_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "probseg/domain.hpp"
#include "probseg/errors.hpp"
#include "probseg/simplex.hpp"

namespace probseg {

/// Per-pixel probability field: one length-L probability vector per pixel,
/// stored contiguously in row-major pixel order, channel-fastest. Immutable
/// after construction; safe to share across concurrent readers.
class ProbSegmentation {
 public:
  ProbSegmentation(PixelDomain domain, LabelSet labels,
                   std::vector<double> values)
      : domain_(std::move(domain)),
        labels_(std::move(labels)),
        values_(std::move(values)) {
    if (values_.size() != domain_.pixel_count() * labels_.size()) {
      throw std::invalid_argument(
          "ProbSegmentation: expected " +
          std::to_string(domain_.pixel_count() * labels_.size()) +
          " values, got " + std::to_string(values_.size()));
    }
  }

  const PixelDomain& domain() const { return domain_; }
  const LabelSet& labels() const { return labels_; }
  std::size_t label_count() const { return labels_.size(); }

  std::span<const double> pixel(std::size_t index) const {
    return {values_.data() + index * labels_.size(), labels_.size()};
  }

  double value(std::size_t pixel_index, std::size_t channel) const {
    return values_[pixel_index * labels_.size() + channel];
  }

  const std::vector<double>& values() const { return values_; }

 private:
  PixelDomain domain_;
  LabelSet labels_;
  std::vector<double> values_;
};

/// One region label per pixel. Immutable after construction.
class CrispSegmentation {
 public:
  CrispSegmentation(PixelDomain domain, LabelSet labels,
                    std::vector<int> assignment)
      : domain_(std::move(domain)),
        labels_(std::move(labels)),
        assignment_(std::move(assignment)) {
    if (assignment_.size() != domain_.pixel_count()) {
      throw std::invalid_argument(
          "CrispSegmentation: expected " +
          std::to_string(domain_.pixel_count()) + " assignments, got " +
          std::to_string(assignment_.size()));
    }
    for (std::size_t i = 0; i < assignment_.size(); ++i) {
      if (!labels_.contains(assignment_[i])) {
        throw std::invalid_argument(
            "CrispSegmentation: pixel " + std::to_string(i) +
            " assigned label " + std::to_string(assignment_[i]) +
            " outside label set " + labels_.to_string());
      }
    }
  }

  const PixelDomain& domain() const { return domain_; }
  const LabelSet& labels() const { return labels_; }
  int label(std::size_t pixel_index) const { return assignment_[pixel_index]; }
  const std::vector<int>& assignment() const { return assignment_; }

 private:
  PixelDomain domain_;
  LabelSet labels_;
  std::vector<int> assignment_;
};

struct Violation {
  enum class Kind { negative_component, component_above_one, sum_deviation };
  std::size_t pixel;
  Kind kind;
  double value;  // the offending component, or the actual sum

  std::string message() const {
    switch (kind) {
      case Kind::negative_component:
        return "pixel " + std::to_string(pixel) + ": negative component " +
               std::to_string(value);
      case Kind::component_above_one:
        return "pixel " + std::to_string(pixel) + ": component " +
               std::to_string(value) + " exceeds 1";
      case Kind::sum_deviation:
        return "pixel " + std::to_string(pixel) + ": components sum to " +
               std::to_string(value) + " (expected 1)";
    }
    return {};
  }
};

/// Diagnoses every simplex-invariant breach, one entry per offending
/// component or sum. Returns an empty list iff the segmentation is valid;
/// never throws.
inline std::vector<Violation> validate(const ProbSegmentation& seg) {
  std::vector<Violation> out;
  for (std::size_t px = 0; px < seg.domain().pixel_count(); ++px) {
    const auto p = seg.pixel(px);
    double sum = 0.0;
    for (double x : p) {
      if (x < 0.0) {
        out.push_back({px, Violation::Kind::negative_component, x});
      } else if (x > 1.0) {
        out.push_back({px, Violation::Kind::component_above_one, x});
      }
      sum += x;
    }
    if (std::abs(sum - 1.0) > kSimplexSumTolerance) {
      out.push_back({px, Violation::Kind::sum_deviation, sum});
    }
  }
  return out;
}

/// One-hot embedding: the assigned label's channel gets 1, all others 0.
inline ProbSegmentation crisp_to_prob(const CrispSegmentation& seg) {
  const std::size_t n = seg.domain().pixel_count();
  const std::size_t L = seg.labels().size();
  std::vector<double> values(n * L, 0.0);
  for (std::size_t px = 0; px < n; ++px) {
    values[px * L + *seg.labels().position_of(seg.label(px))] = 1.0;
  }
  return {seg.domain(), seg.labels(), std::move(values)};
}

/// Hard decision: each pixel takes the label of its maximal probability,
/// ties broken by the lowest channel position.
inline CrispSegmentation prob_to_crisp(const ProbSegmentation& seg) {
  const std::size_t n = seg.domain().pixel_count();
  std::vector<int> assignment(n);
  for (std::size_t px = 0; px < n; ++px) {
    const auto p = seg.pixel(px);
    std::size_t best = 0;
    for (std::size_t c = 1; c < p.size(); ++c) {
      if (p[c] > p[best]) best = c;
    }
    assignment[px] = seg.labels().label_at(best);
  }
  return {seg.domain(), seg.labels(), std::move(assignment)};
}

/// Repairs near-valid probability vectors by rescaling each pixel to unit
/// sum. Sums farther than kSimplexRepairTolerance from 1, or any negative
/// component, are beyond repair and raise validation_error. Useful after
/// decimal-text round trips, which perturb sums by a few ulps.
inline ProbSegmentation normalized(const ProbSegmentation& seg) {
  const std::size_t n = seg.domain().pixel_count();
  const std::size_t L = seg.label_count();
  std::vector<double> values(seg.values());
  for (std::size_t px = 0; px < n; ++px) {
    double sum = 0.0;
    for (std::size_t c = 0; c < L; ++c) {
      const double x = values[px * L + c];
      if (x < 0.0) {
        throw validation_error("normalize: pixel " + std::to_string(px) +
                               " has negative component " + std::to_string(x));
      }
      sum += x;
    }
    if (std::abs(sum - 1.0) > kSimplexRepairTolerance) {
      throw validation_error("normalize: pixel " + std::to_string(px) +
                             " sums to " + std::to_string(sum) +
                             ", beyond repair tolerance");
    }
    for (std::size_t c = 0; c < L; ++c) values[px * L + c] /= sum;
  }
  return {seg.domain(), seg.labels(), std::move(values)};
}

/// Rebuilds the segmentation with channel j sourced from channel
/// `permutation[j]` of `seg` and labeled by `new_labels`.
inline ProbSegmentation reorder_channels(const ProbSegmentation& seg,
                                         std::span<const std::size_t> permutation,
                                         LabelSet new_labels) {
  const std::size_t L = seg.label_count();
  if (permutation.size() != L || new_labels.size() != L) {
    throw std::invalid_argument("reorder_channels: size mismatch");
  }
  const std::size_t n = seg.domain().pixel_count();
  std::vector<double> values(n * L);
  for (std::size_t px = 0; px < n; ++px) {
    for (std::size_t c = 0; c < L; ++c) {
      values[px * L + c] = seg.value(px, permutation[c]);
    }
  }
  return {seg.domain(), std::move(new_labels), std::move(values)};
}

/// Appends an all-zero channel carrying `label`. The result is still a
/// valid segmentation (zero mass added).
inline ProbSegmentation extend_with_zero_channel(const ProbSegmentation& seg,
                                                 int label) {
  if (seg.labels().contains(label)) {
    throw std::invalid_argument("extend_with_zero_channel: label " +
                                std::to_string(label) + " already present");
  }
  const std::size_t n = seg.domain().pixel_count();
  const std::size_t L = seg.label_count();
  std::vector<int> labels = seg.labels().labels();
  labels.push_back(label);
  std::vector<double> values(n * (L + 1), 0.0);
  for (std::size_t px = 0; px < n; ++px) {
    for (std::size_t c = 0; c < L; ++c) {
      values[px * (L + 1) + c] = seg.value(px, c);
    }
  }
  return {seg.domain(), LabelSet(std::move(labels)), std::move(values)};
}

}  // namespace probseg

#endif  // PROBSEG_SEGMENTATION_HPP
