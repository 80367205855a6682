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

#ifndef PROBSEG_ASSIGNMENT_HPP
#define PROBSEG_ASSIGNMENT_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace probseg::detail {

/// Minimum-cost perfect assignment on an n x n row-major cost matrix via
/// the Kuhn-Munkres algorithm in its O(n^3) shortest-augmenting-path form
/// with row/column potentials. Returns the column assigned to each row.
inline std::vector<std::size_t> solve_assignment(std::span<const double> cost,
                                                 std::size_t n) {
  if (n == 0) {
    throw std::invalid_argument("solve_assignment: empty matrix");
  }
  for (double c : cost) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("solve_assignment: weights must be finite");
    }
  }
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based; p[j] is the row matched to column j, column 0 is virtual.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      std::size_t j1 = 0;
      double delta = inf;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    // Unwind the augmenting path.
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

inline double assignment_total(std::span<const double> cost, std::size_t n,
                               std::span<const std::size_t> row_to_col) {
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) total += cost[r * n + row_to_col[r]];
  return total;
}

/// The lexicographically smallest optimal assignment, by row-major order:
/// among all minimum-cost assignments, row 0 takes its smallest feasible
/// column, then row 1, and so on. Achieved by fixing rows top-down and
/// re-solving the remaining subproblem for each candidate column, so ties
/// in the cost matrix resolve identically on every run.
inline std::vector<std::size_t> solve_assignment_lex(
    std::span<const double> cost, std::size_t n) {
  std::vector<std::size_t> assignment = solve_assignment(cost, n);
  const double best_total = assignment_total(cost, n, assignment);
  const double eps = 1e-12 * (1.0 + std::abs(best_total));

  std::vector<std::size_t> result(n);
  std::vector<std::size_t> remaining_cols(n);
  for (std::size_t j = 0; j < n; ++j) remaining_cols[j] = j;
  double fixed_cost = 0.0;

  for (std::size_t row = 0; row < n; ++row) {
    const std::size_t m = n - row - 1;  // rows below this one
    std::size_t chosen = remaining_cols.size();
    double fallback_total = std::numeric_limits<double>::infinity();
    std::size_t fallback = 0;
    for (std::size_t k = 0; k < remaining_cols.size(); ++k) {
      const std::size_t col = remaining_cols[k];
      double total = fixed_cost + cost[row * n + col];
      if (m > 0) {
        // Subproblem over rows (row+1..n-1) and the remaining columns.
        std::vector<double> sub(m * m);
        std::size_t sj = 0;
        for (std::size_t k2 = 0; k2 < remaining_cols.size(); ++k2) {
          if (k2 == k) continue;
          for (std::size_t r2 = 0; r2 < m; ++r2) {
            sub[r2 * m + sj] = cost[(row + 1 + r2) * n + remaining_cols[k2]];
          }
          ++sj;
        }
        const auto sub_assign = solve_assignment(sub, m);
        total += assignment_total(sub, m, sub_assign);
      }
      if (total <= best_total + eps) {
        chosen = k;
        break;
      }
      if (total < fallback_total) {
        fallback_total = total;
        fallback = k;
      }
    }
    if (chosen == remaining_cols.size()) chosen = fallback;
    result[row] = remaining_cols[chosen];
    fixed_cost += cost[row * n + remaining_cols[chosen]];
    remaining_cols.erase(remaining_cols.begin() +
                         static_cast<std::ptrdiff_t>(chosen));
  }
  return result;
}

}  // namespace probseg::detail

#endif  // PROBSEG_ASSIGNMENT_HPP
