#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "asmatch/matcher.hpp"
#include "test_util.hpp"

using namespace asmatch;
using testutil::random_adjacency;
using testutil::random_matrix;

namespace {

double quadratic_along(const Eigen::MatrixXd& A, const Eigen::MatrixXd& At,
                       const Eigen::MatrixXd& K, double lambda, const Eigen::MatrixXd& N,
                       const Eigen::MatrixXd& D, double alpha) {
  const Eigen::MatrixXd Na = N + alpha * (D - N);
  return objective_score(A, At, K, lambda, Na);
}

}  // namespace

TEST_CASE("objective score on hand-checked cases") {
  Eigen::MatrixXd A(2, 2);
  A << 0, 1, 1, 0;
  const Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2, 2);
  CHECK(objective_score(A, A, K, 1.0, Eigen::MatrixXd::Zero(2, 2)) == 0.0);
  CHECK(objective_score(A, A, K, 1.0, Eigen::MatrixXd::Identity(2, 2)) ==
        doctest::Approx(1.0));
  // With a pure-similarity term the score is lambda * tr(N^T K).
  CHECK(objective_score(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2),
                        Eigen::MatrixXd::Ones(2, 2), 2.0, Eigen::MatrixXd::Identity(2, 2)) ==
        doctest::Approx(4.0));
}

TEST_CASE("the true permutation scores at least as high as random ones") {
  const NoisyPair pair = generate_noisy_pair(6, 0.5, 0.0, 21);
  MatchingProblem p(pair.g, pair.g_tilde);
  const Eigen::MatrixXd M_true = mapping_matrix(6, pair.ground_truth);
  const double best = objective_score(p, M_true);

  std::vector<Eigen::Index> perm(6);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(objective_score(p, mapping_matrix(6, perm)) <= best + 1e-12);
  }
}

TEST_CASE("gradient matches the bilinear form") {
  // With identity-like couplings the gradient reduces to A N A~ + lambda K;
  // self-weights are fine for the raw overload.
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
  const Eigen::MatrixXd N = random_matrix(2, 2, 1);
  const Eigen::MatrixXd K = random_matrix(2, 2, 2);
  const Eigen::MatrixXd G = objective_gradient(I, I, K, 3.0, N);
  CHECK((G - (N + 3.0 * K)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("gradient matches central finite differences") {
  const double h = 1e-6;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Eigen::MatrixXd A = random_adjacency(5, seed);
    const Eigen::MatrixXd At = random_adjacency(5, seed + 50);
    const Eigen::MatrixXd K = random_matrix(5, 5, seed + 100, -1.0, 1.0);
    Eigen::MatrixXd N = random_matrix(5, 5, seed + 150);
    const Eigen::MatrixXd G = objective_gradient(A, At, K, 1.0, N);

    for (Eigen::Index i = 0; i < 5; ++i) {
      for (Eigen::Index j = 0; j < 5; ++j) {
        const double keep = N(i, j);
        N(i, j) = keep + h;
        const double up = objective_score(A, At, K, 1.0, N);
        N(i, j) = keep - h;
        const double down = objective_score(A, At, K, 1.0, N);
        N(i, j) = keep;
        const double fd = (up - down) / (2.0 * h);
        CHECK(std::abs(G(i, j) - fd) <= 1e-4 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST_CASE("optimal step on constructed quadratics") {
  // 1x1 instances make the quadratic coefficients explicit:
  // a = 0.5 * p^2 * A * A~, b = p * (A N A~ + lambda K).
  Eigen::MatrixXd A(1, 1), At(1, 1), K(1, 1), N(1, 1), D(1, 1);

  SUBCASE("interior maximum at -b/(2a)") {
    A << -2;
    At << 1;
    K << 1;
    N << 0;
    D << 1;  // p = 1, a = -1, b = 1
    CHECK(optimal_step(A, At, K, 1.0, N, D) == doctest::Approx(0.5));
  }

  SUBCASE("ascent all the way to the far end") {
    A << 2;
    At << 1;
    K << 0;
    N << 1;
    D << 2;  // p = 1, a = 1, b = 2: increasing on [0,1]
    CHECK(optimal_step(A, At, K, 1.0, N, D) == doctest::Approx(1.0));
  }

  SUBCASE("descent direction stays put") {
    A << 2;
    At << 1;
    K << 0;
    N << -1;
    D << 0;  // p = 1, a = 1, b = -2: a + b <= 0
    CHECK(optimal_step(A, At, K, 1.0, N, D) == doctest::Approx(0.0));
  }

  SUBCASE("zero direction is a fixed point") {
    A << 1;
    At << 1;
    K << 1;
    N << 0.5;
    D << 0.5;
    CHECK(optimal_step(A, At, K, 1.0, N, D) == doctest::Approx(0.0));
  }
}

TEST_CASE("optimal step beats a fine grid") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Eigen::MatrixXd A = random_adjacency(5, seed + 10);
    const Eigen::MatrixXd At = random_adjacency(5, seed + 60);
    const Eigen::MatrixXd K = random_matrix(5, 5, seed + 110, -1.0, 1.0);
    const Eigen::MatrixXd N = random_matrix(5, 5, seed + 160);
    const Eigen::MatrixXd D = random_matrix(5, 5, seed + 210);

    const double alpha = optimal_step(A, At, K, 1.0, N, D);
    CHECK(alpha >= 0.0);
    CHECK(alpha <= 1.0);
    const double at_alpha = quadratic_along(A, At, K, 1.0, N, D, alpha);
    for (int g = 0; g <= 1000; ++g) {
      const double candidate = static_cast<double>(g) / 1000.0;
      CHECK(at_alpha >= quadratic_along(A, At, K, 1.0, N, D, candidate) - 1e-12);
    }
  }
}

TEST_CASE("matching a graph against itself recovers the identity") {
  const NoisyPair pair = generate_noisy_pair(50, 0.15, 0.0, 17);
  MatchingProblem p(pair.g, pair.g);
  const MatchResult result = asm_match(p);

  std::vector<Eigen::Index> identity(50);
  std::iota(identity.begin(), identity.end(), 0);
  CHECK(node_accuracy(result.mapping, identity) == doctest::Approx(1.0));
  CHECK(result.matching_error == doctest::Approx(0.0));
  // Matching a graph to itself perfectly scores half the squared adjacency
  // norm: each edge contributes once per direction.
  const double expect = 0.5 * pair.g.adjacency().squaredNorm();
  CHECK(result.objective_score == doctest::Approx(expect));
}

TEST_CASE("permuted copies are recovered exactly") {
  const NoisyPair pair = generate_noisy_pair(40, 0.2, 0.0, 23);
  MatchingProblem p(pair.g, pair.g_tilde);
  const MatchResult result = asm_match(p);
  CHECK(node_accuracy(result.mapping, pair.ground_truth) == doctest::Approx(1.0));
  CHECK(result.matching_error == doctest::Approx(0.0));
}

TEST_CASE("objective trace is non-decreasing and betas never fall") {
  const NoisyPair pair = generate_noisy_pair(30, 0.25, 0.15, 5);
  MatchingProblem p(pair.g, pair.g_tilde);
  const MatchResult result = asm_match(p);

  REQUIRE_FALSE(result.objective_trace.empty());
  for (std::size_t k = 1; k < result.objective_trace.size(); ++k) {
    CHECK(result.objective_trace[k] >= result.objective_trace[k - 1] - 1e-9);
  }
  // Only projections that met the residual threshold contribute a beta, so
  // the trace can be shorter than the iteration count but never decreases:
  // each converged projection starts one step below the previous one's beta.
  REQUIRE_FALSE(result.beta_trace.empty());
  CHECK(result.beta_trace.size() <= result.objective_trace.size());
  for (std::size_t k = 1; k < result.beta_trace.size(); ++k) {
    CHECK(result.beta_trace[k] >= result.beta_trace[k - 1] - 1e-12);
  }
  CHECK(result.iterations <= 100);
  CHECK(result.elapsed_seconds >= 0.0);
}

TEST_CASE("capped projections do not advance the inflation schedule") {
  // An unreachable residual threshold makes every projection hit its step
  // cap. The warm start must then stay anchored instead of compounding the
  // capped inflation, which would walk the kernel out of floating-point
  // range within a few outer iterations.
  const NoisyPair pair = generate_noisy_pair(30, 0.25, 0.15, 5);
  MatchingProblem p(pair.g, pair.g_tilde);
  AsmConfig config;
  config.eps = 1e-300;
  config.max_outer_iters = 8;
  const MatchResult result = asm_match(p, config);

  CHECK(result.beta_trace.empty());
  CHECK(result.iterations >= 1);
  CHECK(result.mapping.size() == 30);
  REQUIRE_FALSE(result.objective_trace.empty());
  for (std::size_t k = 1; k < result.objective_trace.size(); ++k) {
    CHECK(result.objective_trace[k] >= result.objective_trace[k - 1] - 1e-9);
  }
}

TEST_CASE("rectangular problems keep the relaxation column-stochastic") {
  const NoisyPair pair = generate_noisy_pair(20, 0.3, 0.0, 31);
  // Drop the last 6 nodes of the copy to get a 20 vs 14 problem.
  const Eigen::MatrixXd small = pair.g_tilde.adjacency().topLeftCorner(14, 14);
  MatchingProblem p(pair.g, Graph(small));
  AsmConfig config;
  const MatchResult result = asm_match(p, config);

  CHECK(result.relaxed.rows() == 20);
  CHECK(result.relaxed.cols() == 14);
  CHECK((result.relaxed.colwise().sum().array() - 1.0).abs().maxCoeff() <=
        10 * config.balance_tol);
  CHECK(result.relaxed.minCoeff() >= 0.0);
  CHECK(result.relaxed.maxCoeff() <= 1.0 + 10 * config.balance_tol);
  CHECK(result.mapping.size() == 14);
  std::vector<char> used(20, 0);
  for (const Eigen::Index r : result.mapping) {
    CHECK(r >= 0);
    CHECK(r < 20);
    CHECK_FALSE(used[r]);
    used[r] = 1;
  }
}

TEST_CASE("fixed inflation baseline runs with a constant beta trace") {
  const NoisyPair pair = generate_noisy_pair(25, 0.25, 0.1, 2);
  MatchingProblem p(pair.g, pair.g_tilde);
  AsmConfig config;
  config.fixed_beta = std::log(25.0);
  const MatchResult result = asm_match(p, config);
  REQUIRE_FALSE(result.beta_trace.empty());
  for (const double b : result.beta_trace) {
    CHECK(b == doctest::Approx(std::log(25.0)));
  }
  for (std::size_t k = 1; k < result.objective_trace.size(); ++k) {
    CHECK(result.objective_trace[k] >= result.objective_trace[k - 1] - 1e-9);
  }
}

TEST_CASE("greedy discretizer is accepted") {
  const NoisyPair pair = generate_noisy_pair(20, 0.3, 0.0, 13);
  MatchingProblem p(pair.g, pair.g_tilde);
  AsmConfig config;
  config.discretizer = Discretizer::greedy;
  const MatchResult result = asm_match(p, config);
  CHECK(result.mapping.size() == 20);
}

TEST_CASE("numerical failure during projection names the outer iteration") {
  const NoisyPair pair = generate_noisy_pair(10, 0.4, 0.0, 1);
  MatchingProblem p(pair.g, pair.g_tilde);
  AsmConfig config;
  config.fixed_beta = 800.0;  // exp(800) overflows
  try {
    asm_match(p, config);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("outer iteration 1") != std::string::npos);
  }
}

TEST_CASE("config validation") {
  const NoisyPair pair = generate_noisy_pair(8, 0.4, 0.0, 1);
  MatchingProblem p(pair.g, pair.g_tilde);
  AsmConfig config;
  config.outer_tol = 0.0;
  CHECK_THROWS_AS(asm_match(p, config), std::invalid_argument);
  config.outer_tol = 1e-4;
  config.max_outer_iters = 0;
  CHECK_THROWS_AS(asm_match(p, config), std::invalid_argument);
  config.max_outer_iters = 100;
  config.fixed_beta = -1.0;
  CHECK_THROWS_AS(asm_match(p, config), std::invalid_argument);
}
