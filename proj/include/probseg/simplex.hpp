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

#ifndef PROBSEG_SIMPLEX_HPP
#define PROBSEG_SIMPLEX_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace probseg {

/// A point on the probability simplex: non-negative components summing to 1.
using SimplexVector = std::vector<double>;

/// Accepted deviation of a simplex component sum from 1.
inline constexpr double kSimplexSumTolerance = 1e-9;

/// Largest sum deviation the normalization repair accepts; anything worse
/// is rejected as corrupt rather than silently rescaled.
inline constexpr double kSimplexRepairTolerance = 1e-3;

inline double component_sum(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

inline bool is_simplex(std::span<const double> v,
                       double tol = kSimplexSumTolerance) {
  for (double x : v) {
    if (!(x >= 0.0)) return false;
  }
  return std::abs(component_sum(v) - 1.0) <= tol;
}

}  // namespace probseg

#endif  // PROBSEG_SIMPLEX_HPP
