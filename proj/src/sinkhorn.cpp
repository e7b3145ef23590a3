#include "asmatch/sinkhorn.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace asmatch {

namespace {

void check_positive_vector(const Eigen::VectorXd& v, const char* name) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v(i) > 0.0) || !std::isfinite(v(i))) {
      throw std::invalid_argument(std::string(name) + " must be strictly positive and finite");
    }
  }
}

}  // namespace

PositiveMatrix::PositiveMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.size() == 0) {
    throw std::invalid_argument("matrix must be non-empty");
  }
  // Vectorized accept in one pass: x > 0 rejects NaN and nonpositives, the
  // upper bound rejects +inf. Fall back to a scalar scan only to name the
  // offender.
  if (((entries_.array() > 0.0) &&
       (entries_.array() < std::numeric_limits<double>::infinity()))
          .all()) {
    return;
  }
  for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
      const double x = entries_(i, j);
      if (!(x > 0.0) || !std::isfinite(x)) {
        throw std::invalid_argument("matrix entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") is not strictly positive and finite");
      }
    }
  }
}

BalancedMatrix sinkhorn(const PositiveMatrix& X,
                        const Eigen::VectorXd& row_marginals,
                        const Eigen::VectorXd& col_marginals,
                        double tol,
                        int max_iter,
                        const std::optional<Eigen::VectorXd>& initial_c) {
  const Eigen::MatrixXd& M = X.entries();
  const Eigen::Index n = M.rows();
  const Eigen::Index m = M.cols();

  if (row_marginals.size() != n || col_marginals.size() != m) {
    throw std::invalid_argument("marginal lengths must match matrix dimensions");
  }
  check_positive_vector(row_marginals, "row marginals");
  check_positive_vector(col_marginals, "column marginals");
  if (!(tol > 0.0)) {
    throw std::invalid_argument("tol must be positive");
  }
  if (max_iter < 1) {
    throw std::invalid_argument("max_iter must be at least 1");
  }

  const double total_a = row_marginals.sum();
  const double total_b = col_marginals.sum();
  if (std::abs(total_a - total_b) > 1e-12 * std::max(total_a, total_b)) {
    throw std::invalid_argument("row and column marginal sums must agree");
  }

  Eigen::VectorXd c;
  if (initial_c) {
    if (initial_c->size() != m) {
      throw std::invalid_argument("initial column scaling has wrong length");
    }
    check_positive_vector(*initial_c, "initial column scaling");
    c = *initial_c;
  } else {
    c = Eigen::VectorXd::Ones(m);
  }

  BalancedMatrix out;
  out.r = Eigen::VectorXd::Ones(n);
  out.c = c;

  Eigen::VectorXd y = M * c;             // row sums of X diag(c)
  Eigen::VectorXd z(m);
  double residual = std::numeric_limits<double>::infinity();

  int k = 0;
  while (k < max_iter) {
    ++k;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (y(i) < kPositiveFloor) {
        throw BalancingUnderflowError("balancing underflow in row " + std::to_string(i));
      }
    }
    out.r = row_marginals.cwiseQuotient(y);

    z.noalias() = M.transpose() * out.r;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (z(j) < kPositiveFloor) {
        throw BalancingUnderflowError("balancing underflow in column " + std::to_string(j));
      }
    }
    out.c = col_marginals.cwiseQuotient(z);

    // Column sums are exact after the c update; rows carry the violation.
    y.noalias() = M * out.c;
    residual = (out.r.cwiseProduct(y) - row_marginals).cwiseAbs().maxCoeff();
    if (residual <= tol) {
      out.converged = true;
      break;
    }
  }

  out.iterations = k;
  out.residual = residual;
  out.matrix = out.r.asDiagonal() * M * out.c.asDiagonal();
  return out;
}

BalancedMatrix balance_doubly_stochastic(const PositiveMatrix& X, double tol, int max_iter) {
  if (X.rows() != X.cols()) {
    throw std::invalid_argument("doubly stochastic balancing requires a square matrix");
  }
  return sinkhorn(X, Eigen::VectorXd::Ones(X.rows()), Eigen::VectorXd::Ones(X.cols()), tol,
                  max_iter);
}

PositiveMatrix hadamard_rank_one_scale(const PositiveMatrix& X,
                                       const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& v) {
  if (u.size() != X.rows() || v.size() != X.cols()) {
    throw std::invalid_argument("scaling vector lengths must match matrix dimensions");
  }
  check_positive_vector(u, "row scaling");
  check_positive_vector(v, "column scaling");
  return PositiveMatrix(u.asDiagonal() * X.entries() * v.asDiagonal());
}

PositiveMatrix hadamard_power(const PositiveMatrix& X, double p) {
  if (p == 0.0 || !std::isfinite(p)) {
    throw std::invalid_argument("power must be finite and nonzero");
  }
  Eigen::MatrixXd Y = X.entries().array().pow(p);
  if (!Y.allFinite() || (Y.array() < kPositiveFloor).any()) {
    for (Eigen::Index j = 0; j < Y.cols(); ++j) {
      for (Eigen::Index i = 0; i < Y.rows(); ++i) {
        const double x = Y(i, j);
        if (!std::isfinite(x) || x < kPositiveFloor) {
          throw PowerRangeError("power out of representable range at entry (" +
                                std::to_string(i) + "," + std::to_string(j) + ")");
        }
      }
    }
  }
  return PositiveMatrix(std::move(Y));
}

}  // namespace asmatch
