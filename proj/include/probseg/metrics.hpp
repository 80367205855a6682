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

#ifndef PROBSEG_METRICS_HPP
#define PROBSEG_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "probseg/segmentation.hpp"

namespace probseg {

/// Which per-pixel similarity kernel a continuous Dice computation uses.
enum class PixelSimilarityKind {
  absolute_difference,  // f1: complement of half the L1 distance
  aitchison,            // f2: reciprocal ramp of the Aitchison distance
};

inline const char* to_string(PixelSimilarityKind kind) {
  return kind == PixelSimilarityKind::absolute_difference ? "f1" : "f2";
}

/// Per-pixel similarity values in [0,1] over a pixel domain.
struct SimilarityMap {
  PixelDomain domain;
  std::vector<double> values;
};

/// Two probability vectors closer than this componentwise are treated as
/// equal by f2 before its zero-component boundary rule applies. Equality
/// first is what makes f2 score identical crisp pixels as 1 rather than
/// hitting the undefined log(0)-log(0) case.
inline constexpr double kF2EqualityTolerance = 1e-12;

/// Dice similarity between two finite sets: 2|X∩Y| / (|X|+|Y|).
/// 1 iff the sets are identical (and nonempty), 0 iff disjoint.
/// Two empty sets are refused: the ratio is 0/0 and no value is honest.
template <typename T>
double classical_dice(const std::set<T>& x, const std::set<T>& y) {
  if (x.empty() && y.empty()) {
    throw std::invalid_argument("classical_dice: both sets empty (0/0)");
  }
  std::size_t intersection = 0;
  for (const T& e : x) {
    if (y.contains(e)) ++intersection;
  }
  return 2.0 * static_cast<double>(intersection) /
         static_cast<double>(x.size() + y.size());
}

/// Fraction of pixels assigned the same label in both crisp segmentations.
/// Equivalent to the classical Dice of the two pixel-label pair sets, whose
/// cardinalities both equal the pixel count.
inline double crisp_multiregion_dice(const CrispSegmentation& a,
                                     const CrispSegmentation& gt) {
  if (a.domain() != gt.domain()) {
    throw std::invalid_argument("crisp_multiregion_dice: pixel domains differ: " +
                                a.domain().to_string() + " vs " +
                                gt.domain().to_string());
  }
  if (!a.labels().same_labels(gt.labels())) {
    throw std::invalid_argument("crisp_multiregion_dice: label sets differ: " +
                                a.labels().to_string() + " vs " +
                                gt.labels().to_string());
  }
  const std::size_t n = a.domain().pixel_count();
  std::size_t agree = 0;
  for (std::size_t px = 0; px < n; ++px) {
    if (a.label(px) == gt.label(px)) ++agree;
  }
  return static_cast<double>(agree) / static_cast<double>(n);
}

/// f1: one minus half the L1 distance between the probability vectors.
/// 1 iff p = q; 0 iff every region has probability 0 in at least one of
/// the two vectors. Clamped against floating-point drift at the ends.
inline double f1(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("f1: vector lengths differ");
  }
  double l1 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    l1 += std::abs(p[i] - q[i]);
  }
  return std::clamp(1.0 - 0.5 * l1, 0.0, 1.0);
}

/// Aitchison distance between two strictly positive compositions: the
/// Euclidean distance of their centered log-ratio transforms. Geometric
/// means are taken as means of logarithms, never by multiplying
/// components, so large vectors cannot underflow.
inline double aitchison_distance(std::span<const double> p,
                                 std::span<const double> q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("aitchison_distance: vector lengths differ");
  }
  const std::size_t L = p.size();
  double mean_lp = 0.0, mean_lq = 0.0;
  for (std::size_t i = 0; i < L; ++i) {
    if (!(p[i] > 0.0) || !(q[i] > 0.0)) {
      throw std::domain_error(
          "aitchison_distance: components must be strictly positive");
    }
    mean_lp += std::log(p[i]);
    mean_lq += std::log(q[i]);
  }
  mean_lp /= static_cast<double>(L);
  mean_lq /= static_cast<double>(L);
  double d2 = 0.0;
  for (std::size_t i = 0; i < L; ++i) {
    const double diff = (std::log(p[i]) - mean_lp) - (std::log(q[i]) - mean_lq);
    d2 += diff * diff;
  }
  return std::sqrt(d2);
}

/// f2: 1 / (1 + Aitchison distance), extended to the simplex boundary.
///
/// Rules, in order:
///   1. componentwise-equal vectors (tolerance kF2EqualityTolerance) -> 1;
///   2. any zero component in either vector -> 0 (the boundary limit of
///      the distance: certainty anywhere pushes it to infinity);
///   3. otherwise 1 / (1 + d_a).
/// Rule 1 before rule 2 makes the aggregate reduce to the discrete Dice on
/// one-hot inputs: identical crisp pixels score 1, differing ones 0.
inline double f2(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("f2: vector lengths differ");
  }
  bool equal = true;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (std::abs(p[i] - q[i]) > kF2EqualityTolerance) {
      equal = false;
      break;
    }
  }
  if (equal) return 1.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0 || q[i] == 0.0) return 0.0;
  }
  return 1.0 / (1.0 + aitchison_distance(p, q));
}

inline double pixel_similarity(std::span<const double> p,
                               std::span<const double> q,
                               PixelSimilarityKind kind) {
  return kind == PixelSimilarityKind::absolute_difference ? f1(p, q)
                                                          : f2(p, q);
}

struct ContinuousDiceResult {
  double value;       // mean per-pixel similarity, in [0,1]
  SimilarityMap map;  // the per-pixel similarities themselves
};

/// Continuous Dice: the mean of the selected per-pixel similarity over the
/// whole domain. Requires matching domains and label counts with channels
/// already in corresponding order (establish a correspondence first if the
/// label sets are unordered). Pixels are accumulated in fixed row-major
/// order so results are bit-reproducible.
inline ContinuousDiceResult continuous_dice(const ProbSegmentation& a,
                                            const ProbSegmentation& gt,
                                            PixelSimilarityKind kind) {
  if (a.domain() != gt.domain()) {
    throw std::invalid_argument("continuous_dice: pixel domains differ: " +
                                a.domain().to_string() + " vs " +
                                gt.domain().to_string());
  }
  if (a.label_count() != gt.label_count()) {
    throw std::invalid_argument(
        "continuous_dice: label counts differ: " +
        std::to_string(a.label_count()) + " vs " +
        std::to_string(gt.label_count()));
  }
  const std::size_t n = a.domain().pixel_count();
  SimilarityMap map{a.domain(), std::vector<double>(n)};
  double sum = 0.0;
  for (std::size_t px = 0; px < n; ++px) {
    const double v = pixel_similarity(a.pixel(px), gt.pixel(px), kind);
    map.values[px] = v;
    sum += v;
  }
  const double mean = sum / static_cast<double>(n);
  return {std::clamp(mean, 0.0, 1.0), std::move(map)};
}

}  // namespace probseg

#endif  // PROBSEG_METRICS_HPP
