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

#include <numeric>
#include <stdexcept>
#include <vector>

#include "probseg/segmentation.hpp"
#include "test_util.hpp"

namespace probseg {
namespace {

using probseg::testing::random_crisp_segmentation;

ProbSegmentation one_pixel(std::vector<double> p) {
  std::vector<int> labels(p.size());
  std::iota(labels.begin(), labels.end(), 1);
  return {PixelDomain({1}), LabelSet(labels), std::move(p)};
}

TEST(PixelDomain, CountsAndCoordinates) {
  const PixelDomain d({2, 3, 4});
  EXPECT_EQ(d.pixel_count(), 24u);
  EXPECT_EQ(d.rank(), 3u);
  EXPECT_EQ(d.row_length(), 4u);

  std::vector<std::size_t> coords(3);
  d.coords_of(23, coords);
  EXPECT_EQ(coords, (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(d.index_of(coords), 23u);

  EXPECT_THROW(PixelDomain({}), std::invalid_argument);
  EXPECT_THROW(PixelDomain({4, 0}), std::invalid_argument);
  EXPECT_THROW(PixelDomain({2, 2, 2, 2}), std::invalid_argument);
}

TEST(LabelSet, IdentityAndOrder) {
  const LabelSet labels({7, 2, 40});
  EXPECT_EQ(labels.size(), 3u);
  EXPECT_EQ(labels.label_at(0), 7);
  EXPECT_EQ(labels.position_of(40), 2u);
  EXPECT_FALSE(labels.position_of(3).has_value());
  EXPECT_TRUE(labels.same_labels(LabelSet({40, 7, 2})));
  EXPECT_FALSE(labels == LabelSet({40, 7, 2}));  // order-sensitive equality

  EXPECT_THROW(LabelSet({}), std::invalid_argument);
  EXPECT_THROW(LabelSet({1, 1}), std::invalid_argument);
  EXPECT_THROW(LabelSet({-1}), std::invalid_argument);
}

TEST(Validate, AcceptsValidSimplex) {
  EXPECT_TRUE(validate(one_pixel({0.5, 0.5})).empty());
}

TEST(Validate, FlagsSumDeviation) {
  const auto violations = validate(one_pixel({0.7, 0.7}));
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].kind, Violation::Kind::sum_deviation);
  EXPECT_EQ(violations[0].pixel, 0u);
  EXPECT_NEAR(violations[0].value, 1.4, 1e-15);
}

TEST(Validate, FlagsOutOfRangeComponentsButNotSum) {
  // Components break the range constraints while the sum stays exactly 1.
  const auto violations = validate(one_pixel({1.2, -0.2}));
  ASSERT_EQ(violations.size(), 2u);
  EXPECT_EQ(violations[0].kind, Violation::Kind::component_above_one);
  EXPECT_EQ(violations[1].kind, Violation::Kind::negative_component);
}

TEST(Validate, NamesThePixel) {
  const ProbSegmentation seg{PixelDomain({3}),
                             LabelSet({1, 2}),
                             {1.0, 0.0, 0.4, 0.4, 0.0, 1.0}};
  const auto violations = validate(seg);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].pixel, 1u);
}

TEST(CrispToProb, OneHotEmbedding) {
  const CrispSegmentation crisp{PixelDomain({1}), LabelSet({1, 2, 3}), {2}};
  const auto prob = crisp_to_prob(crisp);
  EXPECT_EQ(prob.pixel(0)[0], 0.0);
  EXPECT_EQ(prob.pixel(0)[1], 1.0);
  EXPECT_EQ(prob.pixel(0)[2], 0.0);
}

TEST(CrispToProb, SingleLabelDegenerates) {
  const CrispSegmentation crisp{PixelDomain({2, 2}), LabelSet({5}),
                                {5, 5, 5, 5}};
  const auto prob = crisp_to_prob(crisp);
  for (std::size_t px = 0; px < 4; ++px) {
    EXPECT_EQ(prob.pixel(px)[0], 1.0);
  }
}

TEST(CrispToProb, FourPixelExample) {
  const CrispSegmentation crisp{PixelDomain({4}), LabelSet({1, 2}),
                                {1, 1, 1, 2}};
  const auto prob = crisp_to_prob(crisp);
  EXPECT_EQ(prob.values(), (std::vector<double>{1, 0, 1, 0, 1, 0, 0, 1}));
  EXPECT_TRUE(validate(prob).empty());
}

TEST(ProbToCrisp, ArgmaxWithLowPositionTieBreak) {
  EXPECT_EQ(prob_to_crisp(one_pixel({0.2, 0.3, 0.5})).label(0), 3);
  EXPECT_EQ(prob_to_crisp(one_pixel({0.5, 0.5})).label(0), 1);
}

TEST(ProbToCrisp, RoundTripsOneHot) {
  SplitMix64 rng(11);
  const PixelDomain domain({6, 5});
  const LabelSet labels({0, 3, 9});
  for (int trial = 0; trial < 20; ++trial) {
    const auto crisp = random_crisp_segmentation(rng, domain, labels);
    const auto back = prob_to_crisp(crisp_to_prob(crisp));
    EXPECT_EQ(back.assignment(), crisp.assignment());
  }
}

TEST(ProbSegmentation, PixelAccessIsBitExact) {
  const std::vector<double> values{0.125, 0.875, 0.25, 0.75};
  const ProbSegmentation seg{PixelDomain({2}), LabelSet({1, 2}), values};
  EXPECT_EQ(seg.pixel(0)[0], 0.125);
  EXPECT_EQ(seg.pixel(1)[1], 0.75);
  EXPECT_EQ(seg.values(), values);
}

TEST(ProbSegmentation, RejectsWrongValueCount) {
  EXPECT_THROW(
      ProbSegmentation(PixelDomain({2}), LabelSet({1, 2}), {1.0, 0.0, 0.5}),
      std::invalid_argument);
}

TEST(CrispSegmentation, RejectsForeignLabel) {
  EXPECT_THROW(CrispSegmentation(PixelDomain({2}), LabelSet({1, 2}), {1, 3}),
               std::invalid_argument);
}

TEST(Normalize, RepairsSmallSumDrift) {
  const auto repaired = normalized(one_pixel({0.5000004, 0.5000004}));
  EXPECT_TRUE(validate(repaired).empty());
  EXPECT_NEAR(repaired.pixel(0)[0], 0.5, 1e-12);
}

TEST(Normalize, RejectsLargeDriftAndNegatives) {
  EXPECT_THROW(normalized(one_pixel({0.6, 0.6})), validation_error);
  EXPECT_THROW(normalized(one_pixel({1.2, -0.2})), validation_error);
}

TEST(ReorderChannels, MovesValuesAndLabels) {
  const ProbSegmentation seg{PixelDomain({1}), LabelSet({1, 2, 3}),
                             {0.2, 0.3, 0.5}};
  const std::size_t perm[] = {2, 0, 1};
  const auto out = reorder_channels(seg, perm, LabelSet({9, 8, 7}));
  EXPECT_EQ(out.pixel(0)[0], 0.5);
  EXPECT_EQ(out.pixel(0)[1], 0.2);
  EXPECT_EQ(out.pixel(0)[2], 0.3);
  EXPECT_EQ(out.labels().label_at(0), 9);
}

TEST(ExtendWithZeroChannel, AppendsZeroMass) {
  const auto seg = one_pixel({0.4, 0.6});
  const auto out = extend_with_zero_channel(seg, 5);
  EXPECT_EQ(out.label_count(), 3u);
  EXPECT_EQ(out.pixel(0)[2], 0.0);
  EXPECT_TRUE(validate(out).empty());
  EXPECT_THROW(extend_with_zero_channel(seg, 1), std::invalid_argument);
}

}  // namespace
}  // namespace probseg
