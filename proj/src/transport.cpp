#include "asmatch/transport.hpp"

#include <cmath>
#include <string>

#include "asmatch/softassign.hpp"

namespace asmatch {

namespace {

void check_marginal(const Eigen::VectorXd& v, const char* name) {
  if (v.size() == 0) {
    throw std::invalid_argument(std::string(name) + " must be non-empty");
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v(i) > 0.0) || !std::isfinite(v(i))) {
      throw std::invalid_argument(std::string(name) + " must be strictly positive and finite");
    }
  }
  if (std::abs(v.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument(std::string(name) + " must sum to 1");
  }
}

}  // namespace

TransportProblem::TransportProblem(Eigen::MatrixXd cost, Eigen::VectorXd a, Eigen::VectorXd b,
                                   double beta)
    : cost_(std::move(cost)), a_(std::move(a)), b_(std::move(b)), beta_(beta) {
  if (cost_.size() == 0) {
    throw std::invalid_argument("cost matrix must be non-empty");
  }
  if (!cost_.allFinite() || cost_.minCoeff() < 0.0) {
    throw std::invalid_argument("cost entries must be finite and nonnegative");
  }
  if (a_.size() != cost_.rows() || b_.size() != cost_.cols()) {
    throw std::invalid_argument("marginal lengths must match the cost matrix");
  }
  check_marginal(a_, "row marginal");
  check_marginal(b_, "column marginal");
  if (!(beta_ > 0.0) || !std::isfinite(beta_)) {
    throw std::invalid_argument("beta must be positive and finite");
  }
}

TransportPlan entropic_ot(const TransportProblem& problem, double balance_tol,
                          int max_balance_iter) {
  Eigen::MatrixXd kernel =
      (-problem.beta() * normalize_to_unit_range(problem.cost())).array().exp();
  BalancedMatrix balanced;
  try {
    balanced = sinkhorn(PositiveMatrix(std::move(kernel)), problem.a(), problem.b(), balance_tol,
                        max_balance_iter);
  } catch (const BalancingUnderflowError& e) {
    throw BalancingUnderflowError(std::string(e.what()) +
                                  "; stage the inflation via ot_transition from a smaller beta");
  }

  TransportPlan plan;
  plan.T = std::move(balanced.matrix);
  plan.beta = problem.beta();
  plan.a = problem.a();
  plan.b = problem.b();
  plan.iterations = balanced.iterations;
  plan.residual = balanced.residual;
  plan.converged = balanced.converged;
  return plan;
}

TransportPlan ot_transition(const TransportPlan& plan, double beta_next, double balance_tol,
                            int max_balance_iter) {
  if (!(plan.beta > 0.0)) {
    throw std::invalid_argument("plan beta must be positive");
  }
  if (!(beta_next >= plan.beta)) {
    throw std::invalid_argument("beta_next must be at least the plan's beta");
  }

  PositiveMatrix powered = hadamard_power(PositiveMatrix(plan.T), beta_next / plan.beta);
  BalancedMatrix balanced =
      sinkhorn(powered, plan.a, plan.b, balance_tol, max_balance_iter);

  TransportPlan out;
  out.T = std::move(balanced.matrix);
  out.beta = beta_next;
  out.a = plan.a;
  out.b = plan.b;
  out.iterations = balanced.iterations;
  out.residual = balanced.residual;
  out.converged = balanced.converged;
  return out;
}

Eigen::MatrixXd proximal_step(const Eigen::MatrixXd& S, const Eigen::MatrixXd& X, double beta1,
                              double beta2, double balance_tol, int max_balance_iter) {
  if (!(beta1 > 0.0) || !(beta2 >= beta1)) {
    throw std::invalid_argument("requires beta2 >= beta1 > 0");
  }
  if (S.rows() != X.rows() || S.cols() != X.cols()) {
    throw std::invalid_argument("relaxation and scores must share dimensions");
  }
  if (S.rows() != S.cols()) {
    throw std::invalid_argument("relaxation must be square");
  }

  const Eigen::MatrixXd factor =
      ((beta2 - beta1) * normalize_to_unit_range(X)).array().exp();
  PositiveMatrix scaled(S.cwiseProduct(factor));
  return balance_doubly_stochastic(scaled, balance_tol, max_balance_iter).matrix;
}

double plan_entropy(const Eigen::MatrixXd& T) {
  double h = 0.0;
  for (Eigen::Index j = 0; j < T.cols(); ++j) {
    for (Eigen::Index i = 0; i < T.rows(); ++i) {
      const double t = T(i, j);
      if (!(t > 0.0)) {
        throw std::invalid_argument("entropy requires strictly positive entries");
      }
      h -= t * std::log(t);
    }
  }
  return h;
}

}  // namespace asmatch
