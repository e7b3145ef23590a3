#pragma once

#include <Eigen/Dense>
#include <vector>

namespace asmatch {

// Column j of the profit matrix is assigned to row mapping[j]; entries are
// distinct and total_profit sums the selected entries.
struct AssignmentSolution {
  std::vector<Eigen::Index> mapping;
  double total_profit = 0.0;
};

// Exact maximum-total-profit assignment of columns to distinct rows.
// Requires rows >= cols; rectangular input is zero-padded to square
// internally, so padding never outbids real entries once profits are
// nonnegative.
AssignmentSolution hungarian(const Eigen::MatrixXd& profit);

// Repeatedly takes the largest remaining entry (ties: smallest row, then
// smallest column) and removes its row and column. Fast, not optimal.
AssignmentSolution greedy_discretize(const Eigen::MatrixXd& profit);

}  // namespace asmatch
