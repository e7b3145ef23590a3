#pragma once

#include <Eigen/Dense>
#include <optional>

#include "asmatch/graph.hpp"
#include "asmatch/softassign.hpp"

namespace asmatch {

enum class Discretizer { hungarian, greedy };

// Controls for asm_match. fixed_beta, when set, replaces the adaptive
// projection with plain softassign at that inflation (baseline mode).
struct AsmConfig {
  double lambda = 1.0;
  double eps = 1e-2;         // adaptive projection residual threshold
  double outer_tol = 1e-4;   // on ||N_k - N_{k-1}||_F / sqrt(n * n_tilde)
  int max_outer_iters = 100;
  Discretizer discretizer = Discretizer::hungarian;
  std::optional<double> fixed_beta;
  double balance_tol = 1e-7;  // looser than the library default; projections
                              // only steer a line search here
  int max_balance_iter = kDefaultBalanceMaxIter;
};

// Quadratic alignment score 0.5 * tr(N^T A N A~) + lambda * tr(N^T K) and its
// gradient A N A~ + lambda K. Raw overloads accept arbitrary symmetric A, A~.
double objective_score(const Eigen::MatrixXd& A, const Eigen::MatrixXd& A_tilde,
                       const Eigen::MatrixXd& K, double lambda, const Eigen::MatrixXd& N);
double objective_score(const MatchingProblem& problem, const Eigen::MatrixXd& N);

Eigen::MatrixXd objective_gradient(const Eigen::MatrixXd& A, const Eigen::MatrixXd& A_tilde,
                                   const Eigen::MatrixXd& K, double lambda,
                                   const Eigen::MatrixXd& N);
Eigen::MatrixXd objective_gradient(const MatchingProblem& problem, const Eigen::MatrixXd& N);

// Maximizer of the (exactly quadratic) objective along the segment
// N + alpha * (D - N), alpha in [0, 1].
double optimal_step(const Eigen::MatrixXd& A, const Eigen::MatrixXd& A_tilde,
                    const Eigen::MatrixXd& K, double lambda, const Eigen::MatrixXd& N,
                    const Eigen::MatrixXd& D);
double optimal_step(const MatchingProblem& problem, const Eigen::MatrixXd& N,
                    const Eigen::MatrixXd& D);

// Projected fixed-point matching: embeds the gradient in a square slack
// matrix, relaxes it with (adaptive) softassign, takes the exact line-search
// step, and discretizes the converged iterate. Warm starts between adaptive
// projections advance only when a projection meets its residual threshold;
// a capped projection reuses the previous starting inflation and contributes
// no beta_trace entry.
MatchResult asm_match(const MatchingProblem& problem, const AsmConfig& config = {});

}  // namespace asmatch
