#pragma once

#include <Eigen/Dense>
#include <vector>

#include "asmatch/sinkhorn.hpp"

namespace asmatch {

// Doubly stochastic relaxation of a score matrix at inflation beta.
struct SoftassignOutput {
  Eigen::MatrixXd S;
  double beta = 0.0;
  int total_sinkhorn_iters = 0;
  int transitions_taken = 0;
  bool converged = false;
  std::vector<double> residual_trace;  // adaptive runs only
};

// Controls for the adaptive inflation loop. beta0 and delta_beta default to
// ln(n) for an n-node problem; use adaptive_defaults(n).
struct AdaptiveParams {
  double beta0 = 1.0;
  double delta_beta = 1.0;
  double eps = 1e-2;
  int max_steps = 50;
};

AdaptiveParams adaptive_defaults(Eigen::Index n);

// Rescales X affinely onto [0, 1]; a constant matrix maps to all zeros.
Eigen::MatrixXd normalize_to_unit_range(const Eigen::MatrixXd& X);

// S = balance(exp(beta * X_norm)): sharper toward the dominant permutation as
// beta grows, uniform at beta -> 0.
SoftassignOutput softassign(const Eigen::MatrixXd& X, double beta,
                            double balance_tol = kDefaultBalanceTol,
                            int max_balance_iter = kDefaultBalanceMaxIter);

// Moves an existing relaxation from beta_prev to beta_next by entrywise
// power and re-balancing; never touches the original scores.
SoftassignOutput softassign_transition(const Eigen::MatrixXd& S_prev, double beta_prev,
                                       double beta_next,
                                       double balance_tol = kDefaultBalanceTol,
                                       int max_balance_iter = kDefaultBalanceMaxIter);

// Raises beta in steps of delta_beta until consecutive relaxations differ by
// less than eps in entrywise L1 norm. Always takes at least one step, so the
// reported beta is at least beta0 + delta_beta. use_transitions=false
// recomputes each step from X (reference variant for timing comparisons).
SoftassignOutput adaptive_softassign(const Eigen::MatrixXd& X, const AdaptiveParams& params,
                                     double balance_tol = kDefaultBalanceTol,
                                     int max_balance_iter = kDefaultBalanceMaxIter,
                                     bool use_transitions = true);

// Worst-case per-node score gap of the relaxation at inflation beta: ln(n)/beta.
double error_bound(Eigen::Index n, double beta);

}  // namespace asmatch
