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

#ifndef PROBSEG_CORRESPONDENCE_HPP
#define PROBSEG_CORRESPONDENCE_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "probseg/assignment.hpp"
#include "probseg/metrics.hpp"
#include "probseg/segmentation.hpp"

namespace probseg {

/// Edge weights of the complete bipartite graph between the automated
/// labels (rows) and the ground-truth labels (columns). Each weight is one
/// minus the binary continuous Dice of the two auxiliary segmentations, so
/// it lies in [0,1] and vanishes iff the auxiliary pair is identical.
struct CostMatrix {
  std::vector<int> row_labels;  // automated
  std::vector<int> col_labels;  // ground truth
  std::vector<double> weights;  // row-major, rows x cols

  CostMatrix(std::vector<int> rows_in, std::vector<int> cols_in,
             std::vector<double> weights_in)
      : row_labels(std::move(rows_in)),
        col_labels(std::move(cols_in)),
        weights(std::move(weights_in)) {
    if (row_labels.empty() || col_labels.empty()) {
      throw std::invalid_argument("CostMatrix: empty label axis");
    }
    if (weights.size() != row_labels.size() * col_labels.size()) {
      throw std::invalid_argument("CostMatrix: weight count mismatch");
    }
    for (double w : weights) {
      if (!(w >= 0.0 && w <= 1.0)) {
        throw std::invalid_argument("CostMatrix: weights must lie in [0,1]");
      }
    }
  }

  std::size_t rows() const { return row_labels.size(); }
  std::size_t cols() const { return col_labels.size(); }
  double at(std::size_t r, std::size_t c) const { return weights[r * cols() + c]; }
};

/// The selected label correspondence: min(L1,L2) pairs plus the leftovers
/// on each side.
struct Matching {
  std::vector<std::pair<int, int>> pairs;  // (automated, ground truth)
  std::vector<int> matched_automated;
  std::vector<int> unmatched_automated;
  std::vector<int> unmatched_gt;

  std::optional<int> gt_partner(int automated) const {
    for (const auto& [a, g] : pairs) {
      if (a == automated) return g;
    }
    return std::nullopt;
  }
};

struct Merge {
  int absorbed;  // the previously unmatched region
  int host;      // the matched region it was added to
  double gain;   // Dice improvement of the host's binary comparison
};

/// Greedy merge decisions in the order they were taken.
using MergeRecord = std::vector<Merge>;

enum class MergePolicy { none, over_segmented, under_segmented };

inline const char* to_string(MergePolicy p) {
  switch (p) {
    case MergePolicy::none: return "none";
    case MergePolicy::over_segmented: return "over";
    case MergePolicy::under_segmented: return "under";
  }
  return "";
}

struct CorrespondenceResult {
  Matching matching;
  MergeRecord merges;
  /// The automated segmentation expressed in ground-truth labels: matched
  /// channels renamed, absorbed channels summed into their hosts, unmatched
  /// ground-truth labels carried as all-zero channels. Without merging, any
  /// leftover automated channels are pooled into one synthetic trailing
  /// channel (see synthetic_unmatched_label).
  ProbSegmentation relabeled;
};

namespace detail {

/// Binary auxiliary segmentation for a group of channel positions:
/// foreground is the group's summed probability, background the explicit
/// sum of every other channel.
inline ProbSegmentation auxiliary_from_positions(
    const ProbSegmentation& seg, std::span<const std::size_t> group) {
  const std::size_t n = seg.domain().pixel_count();
  const std::size_t L = seg.label_count();
  std::vector<char> in_group(L, 0);
  for (std::size_t c : group) in_group[c] = 1;
  std::vector<double> values(n * 2);
  for (std::size_t px = 0; px < n; ++px) {
    const auto p = seg.pixel(px);
    double fg = 0.0, bg = 0.0;
    for (std::size_t c = 0; c < L; ++c) {
      (in_group[c] ? fg : bg) += p[c];
    }
    values[px * 2] = fg;
    values[px * 2 + 1] = bg;
  }
  return {seg.domain(), LabelSet({1, 2}), std::move(values)};
}

}  // namespace detail

/// Two-channel view of one region: that region's probability as foreground
/// and everything else summed into the background.
inline ProbSegmentation auxiliary_binary(const ProbSegmentation& seg,
                                         int region) {
  const auto pos = seg.labels().position_of(region);
  if (!pos) {
    throw std::invalid_argument("auxiliary_binary: unknown region label " +
                                std::to_string(region));
  }
  const std::size_t group[] = {*pos};
  return detail::auxiliary_from_positions(seg, group);
}

/// Auxiliary segmentation for two regions taken jointly as foreground.
inline ProbSegmentation auxiliary_binary_merged(const ProbSegmentation& seg,
                                                int region_u, int region_m) {
  if (region_u == region_m) {
    throw std::invalid_argument("auxiliary_binary_merged: regions must differ");
  }
  const auto pos_u = seg.labels().position_of(region_u);
  const auto pos_m = seg.labels().position_of(region_m);
  if (!pos_u || !pos_m) {
    throw std::invalid_argument("auxiliary_binary_merged: unknown region label");
  }
  const std::size_t group[] = {*pos_u, *pos_m};
  return detail::auxiliary_from_positions(seg, group);
}

/// w_ij = 1 - Dcts(auxiliary(a,i), auxiliary(gt,j)) for every label pair.
inline CostMatrix build_cost_matrix(const ProbSegmentation& a,
                                    const ProbSegmentation& gt,
                                    PixelSimilarityKind kind) {
  if (a.domain() != gt.domain()) {
    throw std::invalid_argument("build_cost_matrix: pixel domains differ: " +
                                a.domain().to_string() + " vs " +
                                gt.domain().to_string());
  }
  std::vector<ProbSegmentation> aux_a, aux_gt;
  aux_a.reserve(a.label_count());
  aux_gt.reserve(gt.label_count());
  for (int label : a.labels().labels()) {
    aux_a.push_back(auxiliary_binary(a, label));
  }
  for (int label : gt.labels().labels()) {
    aux_gt.push_back(auxiliary_binary(gt, label));
  }
  std::vector<double> weights;
  weights.reserve(a.label_count() * gt.label_count());
  for (const auto& ai : aux_a) {
    for (const auto& gj : aux_gt) {
      weights.push_back(
          std::clamp(1.0 - continuous_dice(ai, gj, kind).value, 0.0, 1.0));
    }
  }
  return {a.labels().labels(), gt.labels().labels(), std::move(weights)};
}

/// Minimum-weight matching of size min(L1,L2). Rectangular matrices are
/// padded to square with the maximum real weight 1.0, which leaves the
/// optimal real assignment unchanged; rows or columns landing on padding
/// are reported unmatched. Ties between optimal assignments resolve to the
/// lexicographically smallest one in row-major order.
inline Matching hungarian_match(const CostMatrix& costs) {
  const std::size_t rows = costs.rows();
  const std::size_t cols = costs.cols();
  const std::size_t n = std::max(rows, cols);
  std::vector<double> padded(n * n, 1.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      padded[r * n + c] = costs.at(r, c);
    }
  }
  const auto row_to_col = detail::solve_assignment_lex(padded, n);

  Matching m;
  std::vector<char> col_taken(cols, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t c = row_to_col[r];
    if (c < cols) {
      m.pairs.emplace_back(costs.row_labels[r], costs.col_labels[c]);
      m.matched_automated.push_back(costs.row_labels[r]);
      col_taken[c] = 1;
    } else {
      m.unmatched_automated.push_back(costs.row_labels[r]);
    }
  }
  for (std::size_t c = 0; c < cols; ++c) {
    if (!col_taken[c]) m.unmatched_gt.push_back(costs.col_labels[c]);
  }
  std::sort(m.pairs.begin(), m.pairs.end());
  std::sort(m.matched_automated.begin(), m.matched_automated.end());
  std::sort(m.unmatched_automated.begin(), m.unmatched_automated.end());
  std::sort(m.unmatched_gt.begin(), m.unmatched_gt.end());
  return m;
}

/// Greedy absorption of every unmatched automated region into a matched
/// host. Unmatched regions are processed in ascending label order; each is
/// added to the host whose binary Dice against its ground-truth partner
/// improves the most (ties to the lowest host label), even when the best
/// improvement is negative, so the unmatched set always empties. Hosts
/// grow cumulatively: a host's auxiliary foreground includes everything
/// absorbed into it so far.
inline MergeRecord merge_unmatched(const ProbSegmentation& a,
                                   const ProbSegmentation& gt,
                                   const Matching& matching,
                                   PixelSimilarityKind kind) {
  MergeRecord record;
  if (matching.unmatched_automated.empty()) return record;

  // Host label -> its current channel group in `a`.
  std::map<int, std::vector<std::size_t>> groups;
  std::map<int, ProbSegmentation> gt_aux;
  for (const auto& [a_label, gt_label] : matching.pairs) {
    groups[a_label] = {*a.labels().position_of(a_label)};
    gt_aux.emplace(a_label, auxiliary_binary(gt, gt_label));
  }
  if (groups.empty()) {
    throw std::invalid_argument("merge_unmatched: no matched hosts to merge into");
  }

  std::vector<int> unmatched = matching.unmatched_automated;
  std::sort(unmatched.begin(), unmatched.end());
  for (int absorbed : unmatched) {
    const std::size_t absorbed_pos = *a.labels().position_of(absorbed);
    int best_host = 0;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (const auto& [host, group] : groups) {
      const auto& partner_aux = gt_aux.at(host);
      const double base =
          continuous_dice(detail::auxiliary_from_positions(a, group),
                          partner_aux, kind)
              .value;
      std::vector<std::size_t> grown = group;
      grown.push_back(absorbed_pos);
      const double merged =
          continuous_dice(detail::auxiliary_from_positions(a, grown),
                          partner_aux, kind)
              .value;
      const double gain = merged - base;
      if (gain > best_gain) {
        best_gain = gain;
        best_host = host;
      }
    }
    groups[best_host].push_back(absorbed_pos);
    record.push_back({absorbed, best_host, best_gain});
  }
  return record;
}

/// Label used for the pooled leftover channel in no-merge relabeling: one
/// past the largest label on either side.
inline int synthetic_unmatched_label(const LabelSet& a_labels,
                                     const LabelSet& gt_labels) {
  int m = 0;
  for (int l : a_labels.labels()) m = std::max(m, l);
  for (int l : gt_labels.labels()) m = std::max(m, l);
  return m + 1;
}

/// Full correspondence pipeline: cost matrix, Hungarian matching, the
/// selected merge policy, then relabeling into ground-truth labels.
///
/// merge policies:
///   - over_segmented: leftover automated regions are absorbed into hosts
///     (their probabilities summed), so the relabeled output has exactly
///     the ground-truth channels.
///   - under_segmented: the mirror pass merges leftover ground-truth
///     regions against automated hosts. The decisions are recorded for
///     reporting; the relabeled output itself is not regrouped.
///   - none: leftover automated channels are pooled into one synthetic
///     trailing channel so no probability mass is dropped.
/// Unmatched ground-truth labels always appear as all-zero channels.
inline CorrespondenceResult establish_correspondence(
    const ProbSegmentation& a, const ProbSegmentation& gt,
    PixelSimilarityKind kind, MergePolicy policy) {
  if (a.domain() != gt.domain()) {
    throw std::invalid_argument(
        "establish_correspondence: pixel domains differ: " +
        a.domain().to_string() + " vs " + gt.domain().to_string());
  }
  const CostMatrix costs = build_cost_matrix(a, gt, kind);
  const Matching matching = hungarian_match(costs);

  MergeRecord merges;
  if (policy == MergePolicy::over_segmented &&
      !matching.unmatched_automated.empty()) {
    merges = merge_unmatched(a, gt, matching, kind);
  } else if (policy == MergePolicy::under_segmented &&
             !matching.unmatched_gt.empty()) {
    Matching mirrored;
    for (const auto& [a_label, gt_label] : matching.pairs) {
      mirrored.pairs.emplace_back(gt_label, a_label);
      mirrored.matched_automated.push_back(gt_label);
    }
    mirrored.unmatched_automated = matching.unmatched_gt;
    mirrored.unmatched_gt = matching.unmatched_automated;
    std::sort(mirrored.pairs.begin(), mirrored.pairs.end());
    merges = merge_unmatched(gt, a, mirrored, kind);
  }

  // Which automated channels were absorbed, and into which host (only the
  // over-segmented policy regroups automated channels).
  std::map<int, std::vector<std::size_t>> absorbed_by_host;
  std::vector<char> absorbed(a.label_count(), 0);
  if (policy == MergePolicy::over_segmented) {
    for (const auto& m : merges) {
      const std::size_t pos = *a.labels().position_of(m.absorbed);
      absorbed_by_host[m.host].push_back(pos);
      absorbed[pos] = 1;
    }
  }

  const std::size_t n = a.domain().pixel_count();
  const std::size_t gt_count = gt.label_count();

  // Leftover automated channels: unmatched and not absorbed.
  std::vector<std::size_t> leftovers;
  for (int label : matching.unmatched_automated) {
    const std::size_t pos = *a.labels().position_of(label);
    if (!absorbed[pos]) leftovers.push_back(pos);
  }
  std::sort(leftovers.begin(), leftovers.end());

  std::vector<int> out_labels = gt.labels().labels();
  const std::size_t out_count = gt_count + (leftovers.empty() ? 0 : 1);
  if (!leftovers.empty()) {
    out_labels.push_back(synthetic_unmatched_label(a.labels(), gt.labels()));
  }

  // For each output channel, the automated channel group feeding it.
  std::vector<std::vector<std::size_t>> sources(out_count);
  for (std::size_t j = 0; j < gt_count; ++j) {
    const int gt_label = gt.labels().label_at(j);
    for (const auto& [a_label, g_label] : matching.pairs) {
      if (g_label != gt_label) continue;
      sources[j].push_back(*a.labels().position_of(a_label));
      if (auto it = absorbed_by_host.find(a_label);
          it != absorbed_by_host.end()) {
        for (std::size_t pos : it->second) sources[j].push_back(pos);
      }
      break;
    }
  }
  if (!leftovers.empty()) sources[gt_count] = leftovers;

  std::vector<double> values(n * out_count, 0.0);
  for (std::size_t px = 0; px < n; ++px) {
    const auto p = a.pixel(px);
    for (std::size_t j = 0; j < out_count; ++j) {
      double v = 0.0;
      for (std::size_t pos : sources[j]) v += p[pos];
      values[px * out_count + j] = v;
    }
  }
  ProbSegmentation relabeled{a.domain(), LabelSet(std::move(out_labels)),
                             std::move(values)};
  return {matching, merges, std::move(relabeled)};
}

/// Sums each absorbed channel into its host channel and drops it. Applies
/// a merge record to any segmentation carrying the referenced labels; used
/// to present the under-segmented mirror merges on the ground-truth side.
inline ProbSegmentation apply_merge_grouping(const ProbSegmentation& seg,
                                             const MergeRecord& merges) {
  const std::size_t L = seg.label_count();
  // Channel -> destination channel (resolving chains host<-absorbed<-...).
  std::vector<std::size_t> dest(L);
  for (std::size_t c = 0; c < L; ++c) dest[c] = c;
  for (const auto& m : merges) {
    const auto pos_a = seg.labels().position_of(m.absorbed);
    const auto pos_h = seg.labels().position_of(m.host);
    if (!pos_a || !pos_h) {
      throw std::invalid_argument("apply_merge_grouping: unknown label in record");
    }
    dest[*pos_a] = dest[*pos_h];
  }
  std::vector<std::size_t> kept;
  std::vector<int> kept_labels;
  std::vector<std::size_t> out_channel(L);
  for (std::size_t c = 0; c < L; ++c) {
    if (dest[c] == c) {
      out_channel[c] = kept.size();
      kept.push_back(c);
      kept_labels.push_back(seg.labels().label_at(c));
    }
  }
  const std::size_t n = seg.domain().pixel_count();
  std::vector<double> values(n * kept.size(), 0.0);
  for (std::size_t px = 0; px < n; ++px) {
    const auto p = seg.pixel(px);
    for (std::size_t c = 0; c < L; ++c) {
      values[px * kept.size() + out_channel[dest[c]]] += p[c];
    }
  }
  return {seg.domain(), LabelSet(std::move(kept_labels)), std::move(values)};
}

/// Dice of a correspondence result against the ground truth. When the
/// relabeled output carries the synthetic leftover channel, the ground
/// truth is extended with a matching all-zero channel; note the Aitchison
/// kernel then scores every non-identical pixel 0, since the ground truth
/// is certain about the synthetic region.
inline ContinuousDiceResult final_dice(const CorrespondenceResult& result,
                                       const ProbSegmentation& gt,
                                       PixelSimilarityKind kind) {
  if (result.relabeled.label_count() == gt.label_count()) {
    return continuous_dice(result.relabeled, gt, kind);
  }
  const int synthetic =
      result.relabeled.labels().label_at(result.relabeled.label_count() - 1);
  return continuous_dice(result.relabeled,
                         extend_with_zero_channel(gt, synthetic), kind);
}

}  // namespace probseg

#endif  // PROBSEG_CORRESPONDENCE_HPP
