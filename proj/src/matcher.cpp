#include "asmatch/matcher.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "asmatch/assignment.hpp"

namespace asmatch {

double objective_score(const Eigen::MatrixXd& A, const Eigen::MatrixXd& A_tilde,
                       const Eigen::MatrixXd& K, double lambda, const Eigen::MatrixXd& N) {
  const Eigen::MatrixXd ANA = A * N * A_tilde;
  return 0.5 * N.cwiseProduct(ANA).sum() + lambda * N.cwiseProduct(K).sum();
}

double objective_score(const MatchingProblem& problem, const Eigen::MatrixXd& N) {
  return objective_score(problem.g().adjacency(), problem.g_tilde().adjacency(),
                         problem.node_similarity(), problem.lambda(), N);
}

Eigen::MatrixXd objective_gradient(const Eigen::MatrixXd& A, const Eigen::MatrixXd& A_tilde,
                                   const Eigen::MatrixXd& K, double lambda,
                                   const Eigen::MatrixXd& N) {
  return A * N * A_tilde + lambda * K;
}

Eigen::MatrixXd objective_gradient(const MatchingProblem& problem, const Eigen::MatrixXd& N) {
  return objective_gradient(problem.g().adjacency(), problem.g_tilde().adjacency(),
                            problem.node_similarity(), problem.lambda(), N);
}

double optimal_step(const Eigen::MatrixXd& A, const Eigen::MatrixXd& A_tilde,
                    const Eigen::MatrixXd& K, double lambda, const Eigen::MatrixXd& N,
                    const Eigen::MatrixXd& D) {
  const Eigen::MatrixXd P = D - N;
  // Z(N + aP) - Z(N) = a^2 * 0.5 tr(P^T A P A~) + a * tr(P^T (A N A~ + lambda K))
  const double a = 0.5 * P.cwiseProduct(A * P * A_tilde).sum();
  const double b = P.cwiseProduct(A * N * A_tilde + lambda * K).sum();
  if (a < 0.0) {
    return std::clamp(-b / (2.0 * a), 0.0, 1.0);
  }
  return (a + b > 0.0) ? 1.0 : 0.0;
}

double optimal_step(const MatchingProblem& problem, const Eigen::MatrixXd& N,
                    const Eigen::MatrixXd& D) {
  return optimal_step(problem.g().adjacency(), problem.g_tilde().adjacency(),
                      problem.node_similarity(), problem.lambda(), N, D);
}

MatchResult asm_match(const MatchingProblem& problem, const AsmConfig& config) {
  if (!(config.outer_tol > 0.0) || config.max_outer_iters < 1) {
    throw std::invalid_argument("outer_tol must be positive and max_outer_iters at least 1");
  }
  if (config.fixed_beta && !(*config.fixed_beta > 0.0)) {
    throw std::invalid_argument("fixed beta must be positive");
  }

  const auto start = std::chrono::steady_clock::now();

  const Eigen::MatrixXd& A = problem.g().adjacency();
  const Eigen::MatrixXd& At = problem.g_tilde().adjacency();
  const Eigen::MatrixXd& K = problem.node_similarity();
  const double lambda = problem.lambda();
  const Eigen::Index n = problem.g().size();
  const Eigen::Index m = problem.g_tilde().size();

  const double delta_beta = std::log(std::max<Eigen::Index>(n, 2));
  double beta0 = delta_beta;

  MatchResult result;
  Eigen::MatrixXd N = Eigen::MatrixXd::Constant(n, m, 1.0 / static_cast<double>(n));
  Eigen::MatrixXd slack = Eigen::MatrixXd::Zero(n, n);
  const double denom = std::sqrt(static_cast<double>(n) * static_cast<double>(m));

  for (int k = 1; k <= config.max_outer_iters; ++k) {
    result.iterations = k;
    slack.setZero();
    slack.leftCols(m) = objective_gradient(A, At, K, lambda, N);

    SoftassignOutput projected;
    bool at_threshold = true;
    try {
      if (config.fixed_beta) {
        projected = softassign(slack, *config.fixed_beta, config.balance_tol,
                               config.max_balance_iter);
      } else {
        AdaptiveParams params;
        params.beta0 = beta0;
        params.delta_beta = delta_beta;
        params.eps = config.eps;
        projected = adaptive_softassign(slack, params, config.balance_tol,
                                        config.max_balance_iter);
        // The residual-threshold inflation only exists when the projection
        // converged. A projection that ran out of steps keeps the previous
        // warm-start anchor; advancing the anchor from a capped run compounds
        // across iterations and drives the schedule out of floating-point
        // range, which is exactly what the step cap is there to prevent.
        at_threshold = projected.converged;
        if (at_threshold) {
          beta0 = projected.beta - delta_beta;  // warm start for the next projection
        }
      }
    } catch (const NumericalError& e) {
      throw NumericalError("matching aborted at outer iteration " + std::to_string(k) + ": " +
                           e.what());
    }
    if (at_threshold) {
      result.beta_trace.push_back(projected.beta);
    }

    const Eigen::MatrixXd D = projected.S.leftCols(m);
    const double alpha = optimal_step(A, At, K, lambda, N, D);
    const Eigen::MatrixXd N_next = (1.0 - alpha) * N + alpha * D;
    const double change = (N_next - N).norm() / denom;
    N = N_next;
    result.objective_trace.push_back(objective_score(A, At, K, lambda, N));

    if (change < config.outer_tol) {
      result.converged = true;
      break;
    }
  }

  AssignmentSolution discrete = (config.discretizer == Discretizer::hungarian)
                                    ? hungarian(N)
                                    : greedy_discretize(N);
  result.mapping = std::move(discrete.mapping);
  result.relaxed = std::move(N);
  const Eigen::MatrixXd M = mapping_matrix(n, result.mapping);
  result.objective_score = objective_score(A, At, K, lambda, M);
  result.matching_error = matching_error(problem, result.mapping);
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace asmatch
