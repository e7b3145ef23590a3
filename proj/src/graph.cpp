#include "asmatch/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace asmatch {

Graph::Graph(Eigen::MatrixXd adjacency, std::optional<Eigen::MatrixXd> node_features)
    : adjacency_(std::move(adjacency)), features_(std::move(node_features)) {
  const Eigen::Index n = adjacency_.rows();
  if (n == 0 || adjacency_.cols() != n) {
    throw std::invalid_argument("adjacency must be square and non-empty");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = adjacency_(i, j);
      if (!std::isfinite(a) || a < 0.0) {
        throw std::invalid_argument("adjacency entries must be finite and nonnegative");
      }
      if (adjacency_(i, j) != adjacency_(j, i)) {
        throw std::invalid_argument("adjacency must be symmetric");
      }
    }
    if (adjacency_(j, j) != 0.0) {
      throw std::invalid_argument("adjacency diagonal must be zero");
    }
  }
  if (features_ && features_->rows() != n) {
    throw std::invalid_argument("feature matrix must have one row per node");
  }
  if (features_ && !features_->allFinite()) {
    throw std::invalid_argument("feature entries must be finite");
  }
}

const Eigen::MatrixXd& Graph::node_features() const {
  if (!features_) {
    throw std::logic_error("graph has no node features");
  }
  return *features_;
}

Eigen::Index Graph::edge_count() const {
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < size(); ++i) {
    for (Eigen::Index j = i + 1; j < size(); ++j) {
      if (adjacency_(i, j) != 0.0) ++count;
    }
  }
  return count;
}

MatchingProblem::MatchingProblem(Graph g, Graph g_tilde, double lambda)
    : g_(std::move(g)), g_tilde_(std::move(g_tilde)), lambda_(lambda) {
  if (!std::isfinite(lambda_) || lambda_ < 0.0) {
    throw std::invalid_argument("lambda must be finite and nonnegative");
  }
  if (g_tilde_.size() > g_.size()) {
    std::swap(g_, g_tilde_);
    swapped_ = true;
  }

  const bool fa = g_.has_features();
  const bool fb = g_tilde_.has_features();
  if (fa && fb) {
    if (g_.node_features().cols() != g_tilde_.node_features().cols()) {
      throw std::invalid_argument("node feature dimensions must agree");
    }
    node_similarity_ = g_.node_features() * g_tilde_.node_features().transpose();
    has_features_ = true;
  } else {
    if (fa != fb) {
      std::cerr << "warning: only one graph has node features; ignoring them\n";
    }
    node_similarity_ = Eigen::MatrixXd::Zero(g_.size(), g_tilde_.size());
  }
}

Graph load_edge_list(const std::string& path, bool weighted) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open edge list: " + path);
  }

  struct Edge {
    long long u, v;
    double w;
  };
  std::vector<Edge> edges;
  long long min_id = std::numeric_limits<long long>::max();
  long long max_id = std::numeric_limits<long long>::min();

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    long long u, v;
    if (!(ss >> u)) continue;  // blank or comment-only line
    if (!(ss >> v)) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected 'u v [w]'");
    }
    double w = 1.0;
    if (weighted) {
      if (!(ss >> w)) {
        w = 1.0;
        ss.clear();
      }
      if (!std::isfinite(w)) {
        throw std::domain_error(path + ":" + std::to_string(line_no) + ": weight must be finite");
      }
      if (w < 0.0) {
        throw std::domain_error(path + ":" + std::to_string(line_no) +
                                ": negative edge weight");
      }
    } else {
      double ignored;
      ss >> ignored;
      ss.clear();
    }
    std::string trailing;
    if (ss >> trailing) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": unexpected token '" +
                               trailing + "'");
    }
    if (u < 0 || v < 0) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": negative node id");
    }
    edges.push_back({u, v, w});
    min_id = std::min({min_id, u, v});
    max_id = std::max({max_id, u, v});
  }

  if (edges.empty()) {
    throw std::runtime_error(path + ": no edges");
  }

  const long long base = (min_id >= 1) ? 1 : 0;
  const Eigen::Index n = static_cast<Eigen::Index>(max_id - base + 1);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : edges) {
    const Eigen::Index u = static_cast<Eigen::Index>(e.u - base);
    const Eigen::Index v = static_cast<Eigen::Index>(e.v - base);
    if (u == v) continue;  // zero diagonal invariant
    A(u, v) = e.w;
    A(v, u) = e.w;
  }
  return Graph(std::move(A));
}

void save_edge_list(const Graph& g, const std::string& path, bool weighted) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write edge list: " + path);
  }
  const Eigen::MatrixXd& A = g.adjacency();
  char buf[64];
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    for (Eigen::Index j = i + 1; j < g.size(); ++j) {
      if (A(i, j) == 0.0) continue;
      out << i << ' ' << j;
      if (weighted) {
        std::snprintf(buf, sizeof(buf), "%.17g", A(i, j));
        out << ' ' << buf;
      }
      out << '\n';
    }
  }
}

NoisyPair generate_noisy_pair(Eigen::Index n, double density, double noise, std::uint64_t seed) {
  if (n < 2) {
    throw std::invalid_argument("n must be at least 2");
  }
  if (!(density > 0.0) || !(density < 1.0)) {
    throw std::invalid_argument("density must lie in (0, 1)");
  }
  if (!(noise >= 0.0) || !(noise < 1.0)) {
    throw std::invalid_argument("noise must lie in [0, 1)");
  }
  const double expected_edges = density * static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  if (expected_edges < 1.0) {
    throw std::invalid_argument("expected edge count below 1; raise density or n");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (unit(rng) < density) {
        A(i, j) = 1.0;
        A(j, i) = 1.0;
      }
    }
  }

  std::vector<Eigen::Index> tau(n);
  for (Eigen::Index i = 0; i < n; ++i) tau[i] = i;
  std::shuffle(tau.begin(), tau.end(), rng);

  // Node j of the copy is node tau[j] of the original.
  Eigen::MatrixXd B(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      B(i, j) = A(tau[i], tau[j]);
    }
  }

  Eigen::Index base_edges = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (A(i, j) != 0.0) ++base_edges;
    }
  }

  const Eigen::Index extra = static_cast<Eigen::Index>(
      std::ceil(noise * static_cast<double>(base_edges)));
  const Eigen::Index capacity = n * (n - 1) / 2 - base_edges;
  if (extra > capacity) {
    throw std::invalid_argument("not enough non-edges to add the requested noise");
  }
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  Eigen::Index added = 0;
  while (added < extra) {
    const Eigen::Index i = pick(rng);
    const Eigen::Index j = pick(rng);
    if (i == j || B(i, j) != 0.0) continue;
    B(i, j) = 1.0;
    B(j, i) = 1.0;
    ++added;
  }

  NoisyPair out{Graph(std::move(A)), Graph(std::move(B)), {}};
  out.ground_truth.assign(tau.begin(), tau.end());
  return out;
}

double node_accuracy(const std::vector<Eigen::Index>& mapping,
                     const std::vector<Eigen::Index>& truth) {
  if (mapping.size() != truth.size()) {
    throw std::domain_error("mapping and truth lengths differ");
  }
  if (mapping.empty()) {
    throw std::domain_error("mapping is empty");
  }
  std::size_t hits = 0;
  for (std::size_t j = 0; j < mapping.size(); ++j) {
    if (mapping[j] == truth[j]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(mapping.size());
}

Eigen::MatrixXd mapping_matrix(Eigen::Index n, const std::vector<Eigen::Index>& mapping) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(mapping.size()));
  std::vector<char> used(n, 0);
  for (std::size_t j = 0; j < mapping.size(); ++j) {
    const Eigen::Index i = mapping[j];
    if (i < 0 || i >= n) {
      throw std::domain_error("mapping entry out of range");
    }
    if (used[i]) {
      throw std::domain_error("mapping entries must be distinct");
    }
    used[i] = 1;
    M(i, static_cast<Eigen::Index>(j)) = 1.0;
  }
  return M;
}

double matching_error(const MatchingProblem& problem, const std::vector<Eigen::Index>& mapping) {
  const Eigen::Index n = problem.g().size();
  const Eigen::Index m = problem.g_tilde().size();
  if (static_cast<Eigen::Index>(mapping.size()) != m) {
    throw std::domain_error("mapping length must equal the smaller graph size");
  }
  const Eigen::MatrixXd M = mapping_matrix(n, mapping);
  const Eigen::MatrixXd& A = problem.g().adjacency();
  const Eigen::MatrixXd& At = problem.g_tilde().adjacency();

  double err = 0.25 * (A - M * At * M.transpose()).squaredNorm();
  if (problem.has_features()) {
    err += (problem.g().node_features() - M * problem.g_tilde().node_features()).squaredNorm();
  }
  return err;
}

}  // namespace asmatch
