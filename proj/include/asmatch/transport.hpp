#pragma once

#include <Eigen/Dense>

#include "asmatch/sinkhorn.hpp"

namespace asmatch {

// Entropic optimal transport instance: nonnegative costs, strictly positive
// marginals a (length n) and b (length m) each summing to 1, inflation beta.
class TransportProblem {
 public:
  TransportProblem(Eigen::MatrixXd cost, Eigen::VectorXd a, Eigen::VectorXd b, double beta);

  const Eigen::MatrixXd& cost() const { return cost_; }
  const Eigen::VectorXd& a() const { return a_; }
  const Eigen::VectorXd& b() const { return b_; }
  double beta() const { return beta_; }

 private:
  Eigen::MatrixXd cost_;
  Eigen::VectorXd a_;
  Eigen::VectorXd b_;
  double beta_;
};

// Transport plan with the marginals it satisfies and balancing diagnostics.
struct TransportPlan {
  Eigen::MatrixXd T;
  double beta = 0.0;
  Eigen::VectorXd a;
  Eigen::VectorXd b;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// Balances exp(-beta * cost_norm) to the marginals, where cost_norm is the
// cost rescaled affinely onto [0, 1].
TransportPlan entropic_ot(const TransportProblem& problem,
                          double balance_tol = kDefaultBalanceTol,
                          int max_balance_iter = kDefaultBalanceMaxIter);

// Moves a plan to a sharper (or equal) inflation by entrywise power and
// re-balancing to the same marginals; the costs are not needed.
TransportPlan ot_transition(const TransportPlan& plan, double beta_next,
                            double balance_tol = kDefaultBalanceTol,
                            int max_balance_iter = kDefaultBalanceMaxIter);

// One proximal sharpening step for a unit-marginal relaxation: re-balances
// S * exp((beta2 - beta1) * X_norm), which lands exactly on the inflation-
// beta2 relaxation of X. Requires beta2 >= beta1 > 0.
Eigen::MatrixXd proximal_step(const Eigen::MatrixXd& S, const Eigen::MatrixXd& X, double beta1,
                              double beta2, double balance_tol = kDefaultBalanceTol,
                              int max_balance_iter = kDefaultBalanceMaxIter);

// Shannon entropy -sum T_ij ln T_ij of a strictly positive matrix.
double plan_entropy(const Eigen::MatrixXd& T);

}  // namespace asmatch
