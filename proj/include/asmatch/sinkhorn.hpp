#pragma once

#include <Eigen/Dense>
#include <optional>

#include "asmatch/errors.hpp"

namespace asmatch {

// Denominators below this floor abort balancing instead of being clamped.
inline constexpr double kPositiveFloor = 1e-300;

inline constexpr double kDefaultBalanceTol = 1e-9;
inline constexpr int kDefaultBalanceMaxIter = 5000;

// Rectangular matrix with strictly positive entries, validated on construction.
class PositiveMatrix {
 public:
  explicit PositiveMatrix(Eigen::MatrixXd entries);
  const Eigen::MatrixXd& entries() const { return entries_; }
  Eigen::Index rows() const { return entries_.rows(); }
  Eigen::Index cols() const { return entries_.cols(); }

 private:
  Eigen::MatrixXd entries_;
};

// Result of Sinkhorn balancing: matrix = diag(r) * X * diag(c).
struct BalancedMatrix {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd r;
  Eigen::VectorXd c;
  int iterations = 0;
  double residual = 0.0;  // L-inf marginal violation at exit
  bool converged = false;
};

// Alternately rescales rows and columns of X until row sums match
// row_marginals and column sums match col_marginals within tol (L-inf).
// Marginal sums must agree; reaching max_iter returns converged=false with
// the residual reported rather than throwing.
BalancedMatrix sinkhorn(const PositiveMatrix& X,
                        const Eigen::VectorXd& row_marginals,
                        const Eigen::VectorXd& col_marginals,
                        double tol = kDefaultBalanceTol,
                        int max_iter = kDefaultBalanceMaxIter,
                        const std::optional<Eigen::VectorXd>& initial_c = {});

// Balances a square matrix to unit marginals (doubly stochastic form).
BalancedMatrix balance_doubly_stochastic(const PositiveMatrix& X,
                                         double tol = kDefaultBalanceTol,
                                         int max_iter = kDefaultBalanceMaxIter);

// Entrywise X(i,j) * u(i) * v(j) for strictly positive u, v.
PositiveMatrix hadamard_rank_one_scale(const PositiveMatrix& X,
                                       const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& v);

// Entrywise X(i,j)^p for p != 0; rejects results outside the positive
// representable range.
PositiveMatrix hadamard_power(const PositiveMatrix& X, double p);

}  // namespace asmatch
