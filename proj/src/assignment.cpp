#include "asmatch/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace asmatch {

namespace {

void check_profit(const Eigen::MatrixXd& profit) {
  if (profit.size() == 0) {
    throw std::invalid_argument("profit matrix must be non-empty");
  }
  if (profit.cols() > profit.rows()) {
    throw std::invalid_argument("profit matrix must have at least as many rows as columns");
  }
  if (!profit.allFinite()) {
    throw std::invalid_argument("profit entries must be finite");
  }
}

}  // namespace

AssignmentSolution hungarian(const Eigen::MatrixXd& profit) {
  check_profit(profit);
  const Eigen::Index n = profit.rows();
  const Eigen::Index real_cols = profit.cols();

  // Pad to square and minimize the negated profit with the classic
  // potential-based shortest augmenting path scheme.
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(n, n);
  cost.leftCols(real_cols) = -profit;

  const double inf = std::numeric_limits<double>::infinity();
  // 1-based arrays; p[j] is the column (in "assignee" terms, the row of cost
  // seen transposed) matched to j. Here we assign cost columns to rows by
  // iterating columns as the outer loop.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<Eigen::Index> p(n + 1, 0), way(n + 1, 0);

  for (Eigen::Index j = 1; j <= n; ++j) {
    p[0] = j;
    Eigen::Index i0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[i0] = 1;
      const Eigen::Index j0 = p[i0];
      double delta = inf;
      Eigen::Index i1 = 0;
      for (Eigen::Index i = 1; i <= n; ++i) {
        if (used[i]) continue;
        const double cur = cost(i - 1, j0 - 1) - u[j0] - v[i];
        if (cur < minv[i]) {
          minv[i] = cur;
          way[i] = i0;
        }
        if (minv[i] < delta) {
          delta = minv[i];
          i1 = i;
        }
      }
      for (Eigen::Index i = 0; i <= n; ++i) {
        if (used[i]) {
          u[p[i]] += delta;
          v[i] -= delta;
        } else {
          minv[i] -= delta;
        }
      }
      i0 = i1;
    } while (p[i0] != 0);
    do {
      const Eigen::Index i1 = way[i0];
      p[i0] = p[i1];
      i0 = i1;
    } while (i0 != 0);
  }

  AssignmentSolution out;
  out.mapping.assign(real_cols, -1);
  for (Eigen::Index i = 1; i <= n; ++i) {
    const Eigen::Index j = p[i];
    if (j >= 1 && j <= real_cols) {
      out.mapping[j - 1] = i - 1;
    }
  }
  for (Eigen::Index j = 0; j < real_cols; ++j) {
    out.total_profit += profit(out.mapping[j], j);
  }
  return out;
}

AssignmentSolution greedy_discretize(const Eigen::MatrixXd& profit) {
  check_profit(profit);
  const Eigen::Index n = profit.rows();
  const Eigen::Index m = profit.cols();

  struct Cell {
    double value;
    Eigen::Index row;
    Eigen::Index col;
  };
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(n * m));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      cells.push_back({profit(i, j), i, j});
    }
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.row != b.row) return a.row < b.row;
    return a.col < b.col;
  });

  AssignmentSolution out;
  out.mapping.assign(m, -1);
  std::vector<char> row_used(n, 0), col_used(m, 0);
  Eigen::Index assigned = 0;
  for (const Cell& cell : cells) {
    if (assigned == m) break;
    if (row_used[cell.row] || col_used[cell.col]) continue;
    row_used[cell.row] = 1;
    col_used[cell.col] = 1;
    out.mapping[cell.col] = cell.row;
    out.total_profit += cell.value;
    ++assigned;
  }
  return out;
}

}  // namespace asmatch
