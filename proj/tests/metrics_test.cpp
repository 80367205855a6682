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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "probseg/metrics.hpp"
#include "test_util.hpp"

namespace probseg {
namespace {

using probseg::testing::random_crisp_segmentation;
using probseg::testing::random_prob_segmentation;
using probseg::testing::random_simplex;

// Independent closed form for the two-component Aitchison distance:
// d([p1,p2],[q1,q2]) = |log(p1/p2) - log(q1/q2)| / sqrt(2).
double aitchison_two_part(double p1, double q1) {
  return std::abs(std::log(p1 / (1.0 - p1)) - std::log(q1 / (1.0 - q1))) /
         std::sqrt(2.0);
}

TEST(ClassicalDice, FourPixelForegroundExample) {
  // X = {x1,x2,x3}, Y = {x1,x3}: 2*2 / (3+2) = 4/5.
  const std::set<int> x{1, 2, 3};
  const std::set<int> y{1, 3};
  EXPECT_NEAR(classical_dice(x, y), 0.8, 1e-15);
}

TEST(ClassicalDice, IdenticalAndDisjoint) {
  const std::set<int> x{4, 5};
  EXPECT_EQ(classical_dice(x, x), 1.0);
  EXPECT_EQ(classical_dice(x, std::set<int>{6}), 0.0);
}

TEST(ClassicalDice, BothEmptyRefused) {
  EXPECT_THROW(classical_dice(std::set<int>{}, std::set<int>{}),
               std::invalid_argument);
}

TEST(CrispMultiRegionDice, FourPixelTwoRegionExample) {
  // Assignments (1,1,1,2) vs (1,2,1,2): 3 of 4 pixels agree -> 3/4. The
  // same value falls out of the classical Dice on pixel-label pair sets.
  const CrispSegmentation a{PixelDomain({4}), LabelSet({1, 2}), {1, 1, 1, 2}};
  const CrispSegmentation gt{PixelDomain({4}), LabelSet({1, 2}), {1, 2, 1, 2}};
  EXPECT_NEAR(crisp_multiregion_dice(a, gt), 0.75, 1e-15);

  std::set<std::pair<int, int>> s2_a, s2_gt;
  for (int px = 0; px < 4; ++px) {
    s2_a.insert({px, a.label(px)});
    s2_gt.insert({px, gt.label(px)});
  }
  EXPECT_NEAR(classical_dice(s2_a, s2_gt), 0.75, 1e-15);
}

TEST(CrispMultiRegionDice, Extremes) {
  const CrispSegmentation a{PixelDomain({3}), LabelSet({1, 2}), {1, 2, 1}};
  EXPECT_EQ(crisp_multiregion_dice(a, a), 1.0);
  const CrispSegmentation flipped{PixelDomain({3}), LabelSet({1, 2}),
                                  {2, 1, 2}};
  EXPECT_EQ(crisp_multiregion_dice(a, flipped), 0.0);
}

TEST(CrispMultiRegionDice, RejectsMismatches) {
  const CrispSegmentation a{PixelDomain({2}), LabelSet({1, 2}), {1, 2}};
  const CrispSegmentation other_domain{PixelDomain({3}), LabelSet({1, 2}),
                                       {1, 2, 1}};
  const CrispSegmentation other_labels{PixelDomain({2}), LabelSet({1, 3}),
                                       {1, 3}};
  EXPECT_THROW(crisp_multiregion_dice(a, other_domain), std::invalid_argument);
  EXPECT_THROW(crisp_multiregion_dice(a, other_labels), std::invalid_argument);
}

TEST(F1, HandEvaluatedPair) {
  // 1 - (|0.9-0.7| + |0.1-0.3|)/2 = 0.8.
  const std::vector<double> p{0.9, 0.1}, q{0.7, 0.3};
  EXPECT_NEAR(f1(p, q), 0.8, 1e-15);
}

TEST(F1, IdenticalAndDisjoint) {
  const std::vector<double> p{0.25, 0.5, 0.25};
  EXPECT_EQ(f1(p, p), 1.0);
  EXPECT_EQ(f1(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 0.0);
  EXPECT_THROW(f1(std::vector<double>{1, 0}, std::vector<double>{1, 0, 0}),
               std::invalid_argument);
}

TEST(F1, ZeroExactlyOnDisjointSupport) {
  // Disjoint support on three regions: every region has probability 0 in
  // at least one vector.
  const std::vector<double> p{0.5, 0.5, 0.0}, q{0.0, 0.0, 1.0};
  EXPECT_EQ(f1(p, q), 0.0);
  // One shared region forces f1 > 0.
  const std::vector<double> r{0.5, 0.0, 0.5};
  EXPECT_GT(f1(p, r), 0.0);
}

TEST(F1, SymmetricAndBoundedOnRandomPairs) {
  SplitMix64 rng(101);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t L = 2 + rng.next() % 7;
    const auto p = random_simplex(rng, L);
    const auto q = random_simplex(rng, L);
    const double v = f1(p, q);
    EXPECT_EQ(v, f1(q, p));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(AitchisonDistance, ZeroOnIdenticalVectors) {
  const std::vector<double> p{0.2, 0.3, 0.5};
  EXPECT_EQ(aitchison_distance(p, p), 0.0);
}

TEST(AitchisonDistance, MatchesTwoPartClosedForm) {
  const std::vector<double> p{0.5, 0.5}, q{0.25, 0.75};
  const double expected = aitchison_two_part(0.5, 0.25);
  EXPECT_NEAR(expected, 0.7768361992120932, 1e-15);  // = log(3)/sqrt(2)
  EXPECT_NEAR(aitchison_distance(p, q), expected, 1e-12);
}

TEST(AitchisonDistance, RefusesZeros) {
  const std::vector<double> p{1.0, 0.0}, q{0.5, 0.5};
  EXPECT_THROW(aitchison_distance(p, q), std::domain_error);
}

TEST(AitchisonDistance, SymmetryOnRandomPositivePairs) {
  SplitMix64 rng(202);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t L = 2 + rng.next() % 5;
    const auto p = random_simplex(rng, L, 0.05);
    const auto q = random_simplex(rng, L, 0.05);
    EXPECT_EQ(aitchison_distance(p, q), aitchison_distance(q, p));
  }
}

TEST(AitchisonDistance, PerturbationInvariance) {
  // Componentwise multiplying both vectors by the same positive vector and
  // renormalizing leaves the distance unchanged.
  SplitMix64 rng(203);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t L = 2 + rng.next() % 5;
    const auto p = random_simplex(rng, L, 0.05);
    const auto q = random_simplex(rng, L, 0.05);
    const auto g = random_simplex(rng, L, 0.05);
    std::vector<double> pg(L), qg(L);
    double psum = 0.0, qsum = 0.0;
    for (std::size_t i = 0; i < L; ++i) {
      pg[i] = p[i] * g[i];
      qg[i] = q[i] * g[i];
      psum += pg[i];
      qsum += qg[i];
    }
    for (std::size_t i = 0; i < L; ++i) {
      pg[i] /= psum;
      qg[i] /= qsum;
    }
    EXPECT_NEAR(aitchison_distance(p, q), aitchison_distance(pg, qg), 1e-9);
  }
}

TEST(F2, BoundaryAndIdentity) {
  EXPECT_EQ(f2(std::vector<double>{1, 0, 0}, std::vector<double>{0, 1, 0}),
            0.0);
  const std::vector<double> p{0.2, 0.8};
  EXPECT_EQ(f2(p, p), 1.0);
  // Equality wins over the zero rule: identical crisp pixels score 1.
  const std::vector<double> onehot{1, 0};
  EXPECT_EQ(f2(onehot, onehot), 1.0);
  // Equal-with-zeros but differing elsewhere hits the zero rule.
  EXPECT_EQ(f2(std::vector<double>{0.5, 0.5, 0.0},
               std::vector<double>{0.6, 0.4, 0.0}),
            0.0);
}

TEST(F2, ReciprocalRampOfDistance) {
  const std::vector<double> p{0.5, 0.5}, q{0.25, 0.75};
  const double d = aitchison_two_part(0.5, 0.25);
  EXPECT_NEAR(f2(p, q), 1.0 / (1.0 + d), 1e-12);
  EXPECT_NEAR(f2(p, q), 0.562798079217112, 1e-15);
}

TEST(F2, SymmetricAndBoundedOnRandomPairs) {
  SplitMix64 rng(303);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t L = 2 + rng.next() % 7;
    const auto p = random_simplex(rng, L);
    const auto q = random_simplex(rng, L);
    const double v = f2(p, q);
    EXPECT_EQ(v, f2(q, p));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(F1F2, MonotonePenaltyAwayFromFixedGroundTruth) {
  // Ground truth fixed at [0.5, 0.5]; both kernels must fall strictly as
  // the candidate moves toward either vertex.
  const std::vector<double> gt{0.5, 0.5};
  double prev_f1 = 2.0, prev_f2 = 2.0;
  for (double delta = 0.0; delta < 0.5 - 1e-9; delta += 0.02) {
    const std::vector<double> p{0.5 + delta, 0.5 - delta};
    const double v1 = f1(p, gt);
    const double v2 = f2(p, gt);
    if (delta > 0.0) {
      EXPECT_LT(v1, prev_f1);
      EXPECT_LT(v2, prev_f2);
    }
    prev_f1 = v1;
    prev_f2 = v2;
  }
}

TEST(ContinuousDice, TwoPixelHandExample) {
  // Pixels ([0.9,0.1],[0.5,0.5]) vs ([0.7,0.3],[0.5,0.5]):
  // f1 per pixel is 0.8 and 1.0, so the mean is 0.9.
  const ProbSegmentation a{PixelDomain({2}), LabelSet({1, 2}),
                           {0.9, 0.1, 0.5, 0.5}};
  const ProbSegmentation gt{PixelDomain({2}), LabelSet({1, 2}),
                            {0.7, 0.3, 0.5, 0.5}};
  const auto r =
      continuous_dice(a, gt, PixelSimilarityKind::absolute_difference);
  EXPECT_NEAR(r.value, 0.9, 1e-15);
  ASSERT_EQ(r.map.values.size(), 2u);
  EXPECT_NEAR(r.map.values[0], 0.8, 1e-15);
  EXPECT_EQ(r.map.values[1], 1.0);
}

TEST(ContinuousDice, PerfectOnIdenticalInputs) {
  SplitMix64 rng(404);
  const auto seg = random_prob_segmentation(rng, PixelDomain({4, 4}),
                                            LabelSet({0, 1, 2}));
  EXPECT_EQ(
      continuous_dice(seg, seg, PixelSimilarityKind::absolute_difference).value,
      1.0);
  EXPECT_EQ(continuous_dice(seg, seg, PixelSimilarityKind::aitchison).value,
            1.0);
}

TEST(ContinuousDice, ReducesToCrispDiceOnOneHots) {
  SplitMix64 rng(405);
  const PixelDomain domain({8, 8});
  const LabelSet labels({1, 2, 3});
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = random_crisp_segmentation(rng, domain, labels);
    const auto gt = random_crisp_segmentation(rng, domain, labels);
    const double crisp = crisp_multiregion_dice(a, gt);
    const auto pa = crisp_to_prob(a);
    const auto pgt = crisp_to_prob(gt);
    EXPECT_EQ(
        continuous_dice(pa, pgt, PixelSimilarityKind::absolute_difference)
            .value,
        crisp);
    EXPECT_EQ(continuous_dice(pa, pgt, PixelSimilarityKind::aitchison).value,
              crisp);
  }
}

TEST(ContinuousDice, InvariantUnderCommonChannelPermutation) {
  SplitMix64 rng(406);
  const PixelDomain domain({5, 5});
  const LabelSet labels({1, 2, 3, 4});
  const auto a = random_prob_segmentation(rng, domain, labels);
  const auto gt = random_prob_segmentation(rng, domain, labels);
  const std::size_t perm[] = {2, 0, 3, 1};
  const auto pa = reorder_channels(a, perm, labels);
  const auto pgt = reorder_channels(gt, perm, labels);
  for (auto kind : {PixelSimilarityKind::absolute_difference,
                    PixelSimilarityKind::aitchison}) {
    EXPECT_NEAR(continuous_dice(a, gt, kind).value,
                continuous_dice(pa, pgt, kind).value, 1e-12);
  }
}

TEST(ContinuousDice, RejectsMismatches) {
  SplitMix64 rng(407);
  const auto a =
      random_prob_segmentation(rng, PixelDomain({2, 2}), LabelSet({1, 2}));
  const auto wrong_domain =
      random_prob_segmentation(rng, PixelDomain({2, 3}), LabelSet({1, 2}));
  const auto wrong_count =
      random_prob_segmentation(rng, PixelDomain({2, 2}), LabelSet({1, 2, 3}));
  EXPECT_THROW(
      continuous_dice(a, wrong_domain, PixelSimilarityKind::absolute_difference),
      std::invalid_argument);
  EXPECT_THROW(
      continuous_dice(a, wrong_count, PixelSimilarityKind::absolute_difference),
      std::invalid_argument);
}

TEST(SimilarityMap, ValuesStayInUnitInterval) {
  SplitMix64 rng(408);
  const PixelDomain domain({6, 6});
  const LabelSet labels({0, 1, 2});
  const auto a = random_prob_segmentation(rng, domain, labels);
  const auto gt = random_prob_segmentation(rng, domain, labels);
  for (auto kind : {PixelSimilarityKind::absolute_difference,
                    PixelSimilarityKind::aitchison}) {
    const auto r = continuous_dice(a, gt, kind);
    for (double v : r.map.values) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

}  // namespace
}  // namespace probseg
