#include "mots/hungarian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mots/errors.hpp"

namespace mots {
namespace {

// Shortest augmenting path with row/column potentials, O(n^2 m) for an
// n x m matrix with n <= m. 1-based internally.
std::vector<int> solve_wide(const Matrix& cost) {
  const std::size_t n = cost.rows(), m = cost.cols();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(n, -1);
  for (std::size_t j = 1; j <= m; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<int>(j - 1);
  return row_to_col;
}

Matrix transposed(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) t(c, r) = m(r, c);
  return t;
}

}  // namespace

std::vector<int> solve_assignment(const Matrix& cost) {
  for (double c : cost.values())
    if (!std::isfinite(c)) throw Error("solve_assignment: cost matrix has non-finite entries");
  if (cost.rows() == 0 || cost.cols() == 0) return std::vector<int>(cost.rows(), -1);
  if (cost.rows() <= cost.cols()) return solve_wide(cost);

  const std::vector<int> col_to_row = solve_wide(transposed(cost));
  std::vector<int> row_to_col(cost.rows(), -1);
  for (std::size_t c = 0; c < col_to_row.size(); ++c)
    if (col_to_row[c] >= 0) row_to_col[col_to_row[c]] = static_cast<int>(c);
  return row_to_col;
}

AssociationResult hungarian_solve(const AssignmentProblem& problem) {
  const Matrix& cost = problem.cost;
  AssociationResult result;
  if (cost.rows() == 0 || cost.cols() == 0) {
    fill_unmatched(result, cost.rows(), cost.cols());
    return result;
  }

  double max_abs = 0.0;
  for (double c : cost.values()) {
    if (!std::isfinite(c)) throw Error("hungarian_solve: cost matrix has non-finite entries");
    if (c <= problem.gate) max_abs = std::max(max_abs, std::abs(c));
  }
  // Any single gated pair costs more than swapping every admissible pair.
  const double k = static_cast<double>(std::min(cost.rows(), cost.cols()));
  const double gated_cost = 2.0 * (max_abs + 1.0) * (k + 1.0);

  Matrix priced = cost;
  for (double& c : priced.values())
    if (c > problem.gate) c = gated_cost;

  const std::vector<int> assignment = solve_assignment(priced);
  for (std::size_t r = 0; r < assignment.size(); ++r) {
    const int c = assignment[r];
    if (c >= 0 && cost(r, static_cast<std::size_t>(c)) <= problem.gate)
      result.matches.emplace_back(r, static_cast<std::size_t>(c));
  }
  fill_unmatched(result, cost.rows(), cost.cols());
  return result;
}

}  // namespace mots
