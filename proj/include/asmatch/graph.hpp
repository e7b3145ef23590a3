#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace asmatch {

// Undirected weighted graph: symmetric nonnegative adjacency with a zero
// diagonal, optionally with one feature row per node.
class Graph {
 public:
  explicit Graph(Eigen::MatrixXd adjacency,
                 std::optional<Eigen::MatrixXd> node_features = std::nullopt);

  Eigen::Index size() const { return adjacency_.rows(); }
  const Eigen::MatrixXd& adjacency() const { return adjacency_; }
  bool has_features() const { return features_.has_value(); }
  const Eigen::MatrixXd& node_features() const;
  Eigen::Index edge_count() const;  // undirected edges with nonzero weight

 private:
  Eigen::MatrixXd adjacency_;
  std::optional<Eigen::MatrixXd> features_;
};

// A pair of graphs to align, oriented so that g has at least as many nodes
// as g_tilde; swapped() reports whether the constructor exchanged them.
// node_similarity is F * F_tilde^T when both graphs carry features (zero
// otherwise, with a warning on stderr when exactly one does).
class MatchingProblem {
 public:
  MatchingProblem(Graph g, Graph g_tilde, double lambda = 1.0);

  const Graph& g() const { return g_; }
  const Graph& g_tilde() const { return g_tilde_; }
  double lambda() const { return lambda_; }
  const Eigen::MatrixXd& node_similarity() const { return node_similarity_; }
  bool has_features() const { return has_features_; }
  bool swapped() const { return swapped_; }

 private:
  Graph g_;
  Graph g_tilde_;
  double lambda_;
  Eigen::MatrixXd node_similarity_;
  bool has_features_ = false;
  bool swapped_ = false;
};

// Outcome of a matching run: mapping[j] is the g-node aligned with g_tilde
// node j, scored at the discrete assignment.
struct MatchResult {
  std::vector<Eigen::Index> mapping;
  double objective_score = 0.0;
  double matching_error = 0.0;
  int iterations = 0;
  std::vector<double> beta_trace;       // inflation of each projection that met
                                        // its residual threshold (adaptive runs
                                        // may record fewer entries than
                                        // iterations; fixed-beta runs record
                                        // every iteration)
  std::vector<double> objective_trace;  // relaxed objective per outer iteration
  double elapsed_seconds = 0.0;
  bool converged = false;
  Eigen::MatrixXd relaxed;  // final doubly stochastic iterate
};

// Reads "u v [w]" lines (blank lines and '#' comments skipped). Node ids are
// 0-based unless every id is >= 1, in which case they are treated as
// 1-based. Duplicate edges keep the last weight; self-loops are dropped.
// Unweighted edges get weight 1; weights are ignored unless weighted.
Graph load_edge_list(const std::string& path, bool weighted = false);

// Writes one "u v" or "u v w" line per undirected edge, 0-based, sorted.
void save_edge_list(const Graph& g, const std::string& path, bool weighted = false);

struct NoisyPair {
  Graph g;
  Graph g_tilde;
  std::vector<Eigen::Index> ground_truth;  // g-node matched to each g_tilde node
};

// Samples an Erdos-Renyi graph, relabels a copy by a random permutation, and
// adds ceil(noise * |E|) extra random edges to the copy. Deterministic for a
// fixed seed.
NoisyPair generate_noisy_pair(Eigen::Index n, double density, double noise, std::uint64_t seed);

// Fraction of mapping entries that agree with the ground truth.
double node_accuracy(const std::vector<Eigen::Index>& mapping,
                     const std::vector<Eigen::Index>& truth);

// Structural disagreement of a discrete mapping:
// 0.25 * ||A - M A~ M^T||_F^2 plus ||F - M F~||_F^2 when both graphs have
// features. Zero exactly when the mapping is an isomorphism onto its image.
double matching_error(const MatchingProblem& problem, const std::vector<Eigen::Index>& mapping);

// 0/1 matrix with M(mapping[j], j) = 1; validates that mapping is injective
// and in range for an n x n_tilde problem.
Eigen::MatrixXd mapping_matrix(Eigen::Index n, const std::vector<Eigen::Index>& mapping);

}  // namespace asmatch
