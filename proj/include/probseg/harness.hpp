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

// Synthetic ground truths, graded corruptions (blur, deformation, noise),
// Dice degradation curves and candidate ranking. Everything here is
// deterministic in its seed; see rng.hpp for the generator contract.

#ifndef PROBSEG_HARNESS_HPP
#define PROBSEG_HARNESS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "probseg/format.hpp"
#include "probseg/metrics.hpp"
#include "probseg/rng.hpp"
#include "probseg/segmentation.hpp"

namespace probseg {

enum class PerturbationKind { blur, deform, noise };

inline const char* to_string(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::blur: return "blur";
    case PerturbationKind::deform: return "deform";
    case PerturbationKind::noise: return "noise";
  }
  return "";
}

/// A graded corruption: kind, strength (blur radius or deformation
/// amplitude in pixels, noise standard deviation in probability units) and
/// the seed driving any pseudo-randomness. Strength 0 is the identity.
struct PerturbationSpec {
  PerturbationKind kind;
  double strength;
  std::uint64_t seed;
};

struct CurveSample {
  double strength;
  double dsc_f1;
  double dsc_f2;
};

/// Dice-vs-strength samples for one ground truth and perturbation kind.
struct DegradationCurve {
  PerturbationKind kind;
  std::vector<CurveSample> samples;
};

namespace detail {

inline double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

inline void renormalize_pixels(std::vector<double>& values, std::size_t L) {
  for (std::size_t px = 0; px < values.size() / L; ++px) {
    double sum = 0.0;
    for (std::size_t c = 0; c < L; ++c) sum += values[px * L + c];
    if (sum <= 1e-12) {
      for (std::size_t c = 0; c < L; ++c) {
        values[px * L + c] = 1.0 / static_cast<double>(L);
      }
    } else {
      for (std::size_t c = 0; c < L; ++c) values[px * L + c] /= sum;
    }
  }
}

/// Separable Gaussian smoothing along every axis, kernel truncated at
/// three standard deviations, edges handled by clamping the sample index.
inline std::vector<double> gaussian_blur_values(const ProbSegmentation& seg,
                                                double sigma) {
  const auto& domain = seg.domain();
  const std::size_t L = seg.label_count();
  const std::size_t n = domain.pixel_count();
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double ksum = 0.0;
  for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
    const double w = std::exp(-0.5 * (static_cast<double>(k) / sigma) *
                              (static_cast<double>(k) / sigma));
    kernel[static_cast<std::size_t>(k + radius)] = w;
    ksum += w;
  }
  for (double& w : kernel) w /= ksum;

  std::vector<double> cur(seg.values());
  std::vector<double> next(cur.size());
  std::vector<std::size_t> coords(domain.rank());
  for (std::size_t axis = 0; axis < domain.rank(); ++axis) {
    const auto extent = static_cast<std::ptrdiff_t>(domain.extent(axis));
    for (std::size_t px = 0; px < n; ++px) {
      domain.coords_of(px, coords);
      const auto center = static_cast<std::ptrdiff_t>(coords[axis]);
      for (std::size_t c = 0; c < L; ++c) next[px * L + c] = 0.0;
      for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
        const std::ptrdiff_t pos = std::clamp<std::ptrdiff_t>(
            center + k, 0, extent - 1);
        coords[axis] = static_cast<std::size_t>(pos);
        const std::size_t src = domain.index_of(coords);
        const double w = kernel[static_cast<std::size_t>(k + radius)];
        for (std::size_t c = 0; c < L; ++c) {
          next[px * L + c] += w * cur[src * L + c];
        }
      }
      coords[axis] = static_cast<std::size_t>(center);
    }
    std::swap(cur, next);
  }
  return cur;
}

/// Smooth pseudo-random displacement field: per axis, three separable
/// sinusoidal modes with seeded integer frequencies (1 or 2 cycles) and
/// phases, rescaled so the largest displacement magnitude equals the
/// requested amplitude.
inline std::vector<double> sinusoidal_warp_values(const ProbSegmentation& seg,
                                                  double amplitude,
                                                  std::uint64_t seed) {
  const auto& domain = seg.domain();
  if (domain.rank() != 2) {
    throw std::invalid_argument("perturb: deformation requires a 2D domain");
  }
  const std::size_t H = domain.extent(0);
  const std::size_t W = domain.extent(1);
  const std::size_t L = seg.label_count();
  SplitMix64 rng(seed);

  struct Mode {
    double amp, ky, kx, phase_y, phase_x;
  };
  constexpr std::size_t kModes = 3;
  std::vector<std::vector<Mode>> modes(2);
  for (auto& axis_modes : modes) {
    for (std::size_t m = 0; m < kModes; ++m) {
      Mode mode{};
      mode.amp = 0.25 + rng.next_double();
      mode.ky = rng.next_double() < 0.5 ? 1.0 : 2.0;
      mode.kx = rng.next_double() < 0.5 ? 1.0 : 2.0;
      mode.phase_y = 2.0 * std::numbers::pi * rng.next_double();
      mode.phase_x = 2.0 * std::numbers::pi * rng.next_double();
      axis_modes.push_back(mode);
    }
  }
  const auto field_at = [&](std::size_t axis, double y, double x) {
    double d = 0.0;
    for (const Mode& m : modes[axis]) {
      d += m.amp *
           std::sin(2.0 * std::numbers::pi * m.ky * y /
                        static_cast<double>(H) +
                    m.phase_y) *
           std::sin(2.0 * std::numbers::pi * m.kx * x /
                        static_cast<double>(W) +
                    m.phase_x);
    }
    return d;
  };
  double max_mag = 0.0;
  for (std::size_t y = 0; y < H; ++y) {
    for (std::size_t x = 0; x < W; ++x) {
      const double fy = field_at(0, static_cast<double>(y),
                                 static_cast<double>(x));
      const double fx = field_at(1, static_cast<double>(y),
                                 static_cast<double>(x));
      max_mag = std::max(max_mag, std::hypot(fy, fx));
    }
  }
  const double scale = max_mag > 0.0 ? amplitude / max_mag : 0.0;

  std::vector<double> values(seg.values().size());
  for (std::size_t y = 0; y < H; ++y) {
    for (std::size_t x = 0; x < W; ++x) {
      const double sy = std::clamp(
          static_cast<double>(y) +
              scale * field_at(0, static_cast<double>(y),
                               static_cast<double>(x)),
          0.0, static_cast<double>(H - 1));
      const double sx = std::clamp(
          static_cast<double>(x) +
              scale * field_at(1, static_cast<double>(y),
                               static_cast<double>(x)),
          0.0, static_cast<double>(W - 1));
      const auto y0 = static_cast<std::size_t>(sy);
      const auto x0 = static_cast<std::size_t>(sx);
      const std::size_t y1 = std::min(y0 + 1, H - 1);
      const std::size_t x1 = std::min(x0 + 1, W - 1);
      const double wy = sy - static_cast<double>(y0);
      const double wx = sx - static_cast<double>(x0);
      const std::size_t dst = y * W + x;
      for (std::size_t c = 0; c < L; ++c) {
        const double v00 = seg.value(y0 * W + x0, c);
        const double v01 = seg.value(y0 * W + x1, c);
        const double v10 = seg.value(y1 * W + x0, c);
        const double v11 = seg.value(y1 * W + x1, c);
        values[dst * L + c] = (1.0 - wy) * ((1.0 - wx) * v00 + wx * v01) +
                              wy * ((1.0 - wx) * v10 + wx * v11);
      }
    }
  }
  return values;
}

inline std::vector<double> additive_noise_values(const ProbSegmentation& seg,
                                                 double sigma,
                                                 std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> values(seg.values());
  for (double& v : values) {
    v = std::clamp(v + sigma * rng.next_gaussian(), 0.0, 1.0);
  }
  return values;
}

}  // namespace detail

/// Synthetic probabilistic ground truth: `shape_count` soft-edged random
/// disks and rectangles over a background channel, every probability
/// strictly positive, deterministic in the seed. Labels are 0 for the
/// background and 1..shape_count for the regions.
inline ProbSegmentation make_synthetic_gt(std::size_t shape_count,
                                          const PixelDomain& domain,
                                          std::uint64_t seed) {
  if (domain.rank() != 2 || domain.extent(0) < 8 || domain.extent(1) < 8) {
    throw std::invalid_argument(
        "make_synthetic_gt: need a 2D domain of at least 8x8");
  }
  if (shape_count == 0) {
    throw std::invalid_argument("make_synthetic_gt: need at least one shape");
  }
  const std::size_t H = domain.extent(0);
  const std::size_t W = domain.extent(1);
  const double min_extent = static_cast<double>(std::min(H, W));
  SplitMix64 rng(seed);

  struct Shape {
    bool disk;
    double cy, cx, ry, rx, softness;
  };
  std::vector<Shape> shapes;
  for (std::size_t s = 0; s < shape_count; ++s) {
    Shape sh{};
    sh.disk = rng.next_double() < 0.5;
    sh.cy = (0.15 + 0.7 * rng.next_double()) * static_cast<double>(H);
    sh.cx = (0.15 + 0.7 * rng.next_double()) * static_cast<double>(W);
    sh.ry = (0.10 + 0.18 * rng.next_double()) * min_extent;
    sh.rx = (0.10 + 0.18 * rng.next_double()) * min_extent;
    sh.softness = (0.03 + 0.05 * rng.next_double()) * min_extent;
    shapes.push_back(sh);
  }

  const std::size_t L = shape_count + 1;
  std::vector<double> values(domain.pixel_count() * L);
  for (std::size_t y = 0; y < H; ++y) {
    for (std::size_t x = 0; x < W; ++x) {
      const std::size_t px = y * W + x;
      double bg = 1.0;
      for (std::size_t s = 0; s < shape_count; ++s) {
        const Shape& sh = shapes[s];
        const double dy = static_cast<double>(y) - sh.cy;
        const double dx = static_cast<double>(x) - sh.cx;
        double score;
        if (sh.disk) {
          score = detail::sigmoid((sh.ry - std::hypot(dy, dx)) / sh.softness);
        } else {
          score = detail::sigmoid((sh.ry - std::abs(dy)) / sh.softness) *
                  detail::sigmoid((sh.rx - std::abs(dx)) / sh.softness);
        }
        values[px * L + s + 1] = score + 0.01;
        bg *= 1.0 - score;
      }
      values[px * L] = bg + 0.01;
    }
  }
  detail::renormalize_pixels(values, L);

  std::vector<int> labels(L);
  std::iota(labels.begin(), labels.end(), 0);
  return {domain, LabelSet(std::move(labels)), std::move(values)};
}

/// Applies one graded corruption. Outputs are renormalized per pixel and
/// always pass validation; strength 0 returns the input unchanged.
inline ProbSegmentation perturb(const ProbSegmentation& seg,
                                const PerturbationSpec& spec) {
  if (spec.strength < 0.0) {
    throw std::invalid_argument("perturb: strength must be >= 0");
  }
  if (spec.strength == 0.0) return seg;
  std::vector<double> values;
  switch (spec.kind) {
    case PerturbationKind::blur:
      values = detail::gaussian_blur_values(seg, spec.strength);
      break;
    case PerturbationKind::deform:
      values = detail::sinusoidal_warp_values(seg, spec.strength, spec.seed);
      break;
    case PerturbationKind::noise:
      values = detail::additive_noise_values(seg, spec.strength, spec.seed);
      break;
  }
  detail::renormalize_pixels(values, seg.label_count());
  return {seg.domain(), seg.labels(), std::move(values)};
}

/// Dice degradation along a strength ladder. Strengths must increase
/// strictly and start at 0, so the first sample always reads (0, 1, 1).
/// Each point perturbs the original ground truth with a seed derived from
/// the base seed and the point's index.
inline DegradationCurve degradation_curve(const ProbSegmentation& gt,
                                          PerturbationKind kind,
                                          std::span<const double> strengths,
                                          std::uint64_t seed) {
  if (strengths.empty() || strengths.front() != 0.0) {
    throw std::invalid_argument("degradation_curve: ladder must start at 0");
  }
  for (std::size_t i = 1; i < strengths.size(); ++i) {
    if (!(strengths[i] > strengths[i - 1])) {
      throw std::invalid_argument(
          "degradation_curve: strengths must increase strictly");
    }
  }
  DegradationCurve curve{kind, {}};
  for (std::size_t i = 0; i < strengths.size(); ++i) {
    const ProbSegmentation corrupted =
        perturb(gt, {kind, strengths[i], derive_seed(seed, i)});
    curve.samples.push_back(
        {strengths[i],
         continuous_dice(corrupted, gt,
                         PixelSimilarityKind::absolute_difference)
             .value,
         continuous_dice(corrupted, gt, PixelSimilarityKind::aitchison)
             .value});
  }
  return curve;
}

struct RankedCandidate {
  std::size_t input_index;
  double dsc;
  std::size_t rank;  // 1 = most similar
};

/// Sorts candidates by descending Dice against the ground truth; ties keep
/// input order.
inline std::vector<RankedCandidate> rank_segmentations(
    const ProbSegmentation& gt, std::span<const ProbSegmentation> candidates,
    PixelSimilarityKind kind) {
  std::vector<RankedCandidate> ranked;
  ranked.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].domain() != gt.domain()) {
      throw std::invalid_argument("rank_segmentations: candidate " +
                                  std::to_string(i) +
                                  " has mismatched domain");
    }
    ranked.push_back({i, continuous_dice(candidates[i], gt, kind).value, 0});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedCandidate& a, const RankedCandidate& b) {
                     return a.dsc > b.dsc;
                   });
  for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i].rank = i + 1;
  return ranked;
}

struct PermutationOracleResult {
  // permutation[j] is the channel of `a` placed at ground-truth position j.
  std::vector<std::size_t> permutation;
  double dsc;
};

/// Exhaustive reference for correspondence: tries every channel
/// permutation of `a` against `gt` and returns the Dice-maximizing one
/// (first in lexicographic order among ties). Factorial cost; refuses
/// more than 7 labels.
inline PermutationOracleResult permutation_oracle(const ProbSegmentation& a,
                                                  const ProbSegmentation& gt,
                                                  PixelSimilarityKind kind) {
  if (a.label_count() != gt.label_count()) {
    throw std::invalid_argument("permutation_oracle: label counts differ");
  }
  if (a.label_count() > 7) {
    throw std::invalid_argument(
        "permutation_oracle: more than 7 labels (factorial guard)");
  }
  std::vector<std::size_t> perm(a.label_count());
  std::iota(perm.begin(), perm.end(), 0);
  PermutationOracleResult best{{}, -1.0};
  do {
    const ProbSegmentation candidate = reorder_channels(a, perm, gt.labels());
    const double dsc = continuous_dice(candidate, gt, kind).value;
    if (dsc > best.dsc) {
      best.dsc = dsc;
      best.permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// CSV with header row; numbers carry 17 significant digits.
inline std::string degradation_curve_csv(const DegradationCurve& curve) {
  std::string out = "strength,dsc_f1,dsc_f2\n";
  for (const auto& s : curve.samples) {
    out += detail::format_double(s.strength) + "," +
           detail::format_double(s.dsc_f1) + "," +
           detail::format_double(s.dsc_f2) + "\n";
  }
  return out;
}

inline std::string ranking_csv(std::span<const RankedCandidate> ranked) {
  std::string out = "rank,candidate,dsc\n";
  for (const auto& r : ranked) {
    out += std::to_string(r.rank) + "," + std::to_string(r.input_index) + "," +
           detail::format_double(r.dsc) + "\n";
  }
  return out;
}

}  // namespace probseg

#endif  // PROBSEG_HARNESS_HPP
