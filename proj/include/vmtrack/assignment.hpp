#pragma once

// Rectangular linear assignment (Hungarian method with row/column potentials).

#include <Eigen/Core>
#include <cmath>
#include <limits>
#include <vector>

namespace vmtrack {

/// Marks a forbidden pairing in a cost matrix.
template <typename Scalar = double>
inline constexpr Scalar kForbidden = std::numeric_limits<Scalar>::infinity();

/// Minimum-cost assignment on an n x m cost matrix.
///
/// Returns, for each row, the assigned column or -1. The solution first maximizes the number
/// of finite (allowed) pairings, then minimizes their total cost. Rows or columns left over in a
/// rectangular problem, or whose only options are forbidden, are reported as -1.
template <typename Derived>
[[nodiscard]] std::vector<int> solve_assignment(const Eigen::MatrixBase<Derived>& cost) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  const Eigen::Index rows = cost.rows();
  const Eigen::Index cols = cost.cols();
  std::vector<int> row_to_col(static_cast<std::size_t>(rows), -1);
  if (rows == 0 || cols == 0) return row_to_col;

  const bool transposed = rows > cols;
  Matrix work = transposed ? Matrix(cost.transpose()) : Matrix(cost);
  const Eigen::Index n = work.rows();  // n <= m
  const Eigen::Index m = work.cols();

  // Forbidden entries become a penalty larger than any all-finite matching.
  Scalar max_abs = 0;
  bool any_forbidden = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (std::isfinite(work(i, j))) {
        max_abs = std::max<Scalar>(max_abs, std::abs(work(i, j)));
      } else {
        any_forbidden = true;
      }
    }
  }
  const Scalar penalty = (max_abs + 1) * static_cast<Scalar>(2 * (n + 1));
  if (any_forbidden) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        if (!std::isfinite(work(i, j))) work(i, j) = penalty;
  }

  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  std::vector<Scalar> u(n + 1, 0), v(m + 1, 0);
  std::vector<Eigen::Index> owner(m + 1, 0);  // owner[j]: row (1-based) holding column j
  std::vector<Eigen::Index> way(m + 1, 0);

  for (Eigen::Index i = 1; i <= n; ++i) {
    owner[0] = i;
    Eigen::Index j0 = 0;
    std::vector<Scalar> min_slack(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const Eigen::Index i0 = owner[j0];
      Scalar delta = inf;
      Eigen::Index j1 = 0;
      for (Eigen::Index j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const Scalar slack = work(i0 - 1, j - 1) - u[i0] - v[j];
        if (slack < min_slack[j]) {
          min_slack[j] = slack;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (Eigen::Index j = 0; j <= m; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const Eigen::Index j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  for (Eigen::Index j = 1; j <= m; ++j) {
    if (owner[j] == 0) continue;
    const Eigen::Index r = owner[j] - 1;
    const Eigen::Index c = j - 1;
    const Eigen::Index orig_row = transposed ? c : r;
    const Eigen::Index orig_col = transposed ? r : c;
    if (std::isfinite(cost(orig_row, orig_col))) row_to_col[orig_row] = static_cast<int>(orig_col);
  }
  return row_to_col;
}

/// Sum of cost over assigned rows, in row order.
template <typename Derived>
[[nodiscard]] typename Derived::Scalar assignment_cost(const Eigen::MatrixBase<Derived>& cost,
                                                       const std::vector<int>& row_to_col) {
  typename Derived::Scalar total = 0;
  for (std::size_t i = 0; i < row_to_col.size(); ++i) {
    if (row_to_col[i] >= 0) total += cost(static_cast<Eigen::Index>(i), row_to_col[i]);
  }
  return total;
}

}  // namespace vmtrack
