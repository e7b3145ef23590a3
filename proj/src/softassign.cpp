#include "asmatch/softassign.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace asmatch {

namespace {

void check_square(const Eigen::MatrixXd& X) {
  if (X.rows() == 0 || X.rows() != X.cols()) {
    throw std::invalid_argument("scores must form a non-empty square matrix");
  }
}

void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("beta must be positive and finite");
  }
}

}  // namespace

AdaptiveParams adaptive_defaults(Eigen::Index n) {
  if (n < 1) {
    throw std::invalid_argument("problem size must be at least 1");
  }
  AdaptiveParams p;
  p.beta0 = std::log(std::max<Eigen::Index>(n, 2));
  p.delta_beta = p.beta0;
  return p;
}

Eigen::MatrixXd normalize_to_unit_range(const Eigen::MatrixXd& X) {
  const double lo = X.minCoeff();
  const double hi = X.maxCoeff();
  const double range = hi - lo;
  if (range == 0.0) {
    return Eigen::MatrixXd::Zero(X.rows(), X.cols());
  }
  return (X.array() - lo) / range;
}

SoftassignOutput softassign(const Eigen::MatrixXd& X, double beta, double balance_tol,
                            int max_balance_iter) {
  check_square(X);
  check_beta(beta);
  if (!X.allFinite()) {
    throw std::invalid_argument("scores must be finite");
  }

  Eigen::MatrixXd kernel = (beta * normalize_to_unit_range(X)).array().exp();
  if (!kernel.allFinite()) {
    throw NumericalError("inflation overflow at beta " + std::to_string(beta));
  }

  BalancedMatrix balanced = balance_doubly_stochastic(PositiveMatrix(std::move(kernel)),
                                                      balance_tol, max_balance_iter);
  SoftassignOutput out;
  out.S = std::move(balanced.matrix);
  out.beta = beta;
  out.total_sinkhorn_iters = balanced.iterations;
  out.transitions_taken = 0;
  out.converged = balanced.converged;
  return out;
}

SoftassignOutput softassign_transition(const Eigen::MatrixXd& S_prev, double beta_prev,
                                       double beta_next, double balance_tol,
                                       int max_balance_iter) {
  check_square(S_prev);
  check_beta(beta_prev);
  check_beta(beta_next);

  PositiveMatrix powered = hadamard_power(PositiveMatrix(S_prev), beta_next / beta_prev);
  BalancedMatrix balanced = balance_doubly_stochastic(powered, balance_tol, max_balance_iter);

  SoftassignOutput out;
  out.S = std::move(balanced.matrix);
  out.beta = beta_next;
  out.total_sinkhorn_iters = balanced.iterations;
  out.transitions_taken = 1;
  out.converged = balanced.converged;
  return out;
}

SoftassignOutput adaptive_softassign(const Eigen::MatrixXd& X, const AdaptiveParams& params,
                                     double balance_tol, int max_balance_iter,
                                     bool use_transitions) {
  check_square(X);
  check_beta(params.beta0);
  check_beta(params.delta_beta);
  if (!(params.eps > 0.0)) {
    throw std::invalid_argument("eps must be positive");
  }
  if (params.max_steps < 1) {
    throw std::invalid_argument("max_steps must be at least 1");
  }

  SoftassignOutput current = softassign(X, params.beta0, balance_tol, max_balance_iter);
  SoftassignOutput out;
  out.total_sinkhorn_iters = current.total_sinkhorn_iters;

  // The step kernel is shared by every transition: raising the inflation by a
  // constant delta multiplies the unbalanced kernel entrywise by
  // exp(delta_beta * X_norm), and balancing discards the leftover diagonal
  // factors. This computes the same relaxation as powering the previous S by
  // beta_next/beta (the two kernels differ by row and column scalings only)
  // for the cost of one multiply per step instead of an entrywise power.
  // Consecutive steps solve nearby balancing problems, so each step is seeded
  // with a geometric extrapolation of the last two column scalings (falling
  // back to the last scaling alone while it is the only one available).
  Eigen::MatrixXd step_kernel;
  Eigen::VectorXd unit_marginals;
  Eigen::VectorXd c_last, c_before;
  if (use_transitions) {
    step_kernel = (params.delta_beta * normalize_to_unit_range(X)).array().exp();
    unit_marginals = Eigen::VectorXd::Ones(X.rows());
  }

  double beta = params.beta0;
  for (int step = 1; step <= params.max_steps; ++step) {
    const double beta_next = beta + params.delta_beta;
    SoftassignOutput next;
    try {
      if (use_transitions) {
        std::optional<Eigen::VectorXd> seed;
        if (c_last.size() > 0) {
          if (c_before.size() > 0) {
            Eigen::VectorXd predicted = c_last.array().square() / c_before.array();
            if (predicted.allFinite() && (predicted.array() > 0.0).all()) {
              seed = std::move(predicted);
            } else {
              seed = c_last;
            }
          } else {
            seed = c_last;
          }
        }
        BalancedMatrix balanced =
            sinkhorn(PositiveMatrix(current.S.cwiseProduct(step_kernel)), unit_marginals,
                     unit_marginals, balance_tol, max_balance_iter, seed);
        c_before = std::move(c_last);
        c_last = std::move(balanced.c);
        next.S = std::move(balanced.matrix);
        next.beta = beta_next;
        next.total_sinkhorn_iters = balanced.iterations;
        next.transitions_taken = 1;
        next.converged = balanced.converged;
      } else {
        next = softassign(X, beta_next, balance_tol, max_balance_iter);
      }
    } catch (const NumericalError& e) {
      throw NumericalError("adaptive softassign failed moving to beta " +
                           std::to_string(beta_next) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw NumericalError("adaptive softassign failed moving to beta " +
                           std::to_string(beta_next) + ": " + e.what());
    }

    const double residual = (next.S - current.S).cwiseAbs().sum();
    out.residual_trace.push_back(residual);
    out.total_sinkhorn_iters += next.total_sinkhorn_iters;
    out.transitions_taken = step;

    current.S = std::move(next.S);
    beta = beta_next;

    if (residual < params.eps) {
      out.converged = true;
      break;
    }
  }

  out.S = std::move(current.S);
  out.beta = beta;
  return out;
}

double error_bound(Eigen::Index n, double beta) {
  if (n < 1) {
    throw std::invalid_argument("problem size must be at least 1");
  }
  check_beta(beta);
  return std::log(static_cast<double>(n)) / beta;
}

}  // namespace asmatch
