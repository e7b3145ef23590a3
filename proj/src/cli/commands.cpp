#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "asmatch/matrix_io.hpp"
#include "asmatch/transport.hpp"

namespace asmatch::cli {

namespace {

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::istringstream ss(csv);
  std::string field;
  while (std::getline(ss, field, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(field, &pos));
      if (pos != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw CLI::ValidationError("not a number: '" + field + "'");
    }
  }
  if (out.empty()) {
    throw CLI::ValidationError("expected a comma-separated list of numbers");
  }
  return out;
}

std::vector<std::string> parse_string_list(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream ss(csv);
  std::string field;
  while (std::getline(ss, field, ',')) {
    if (!field.empty()) out.push_back(field);
  }
  if (out.empty()) {
    throw CLI::ValidationError("expected a comma-separated list");
  }
  return out;
}

std::vector<Eigen::Index> load_mapping_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open mapping file: " + path);
  }
  std::vector<Eigen::Index> mapping;
  long long v;
  while (in >> v) {
    mapping.push_back(static_cast<Eigen::Index>(v));
  }
  if (!in.eof()) {
    throw std::runtime_error(path + ": mapping entries must be integers");
  }
  if (mapping.empty()) {
    throw std::runtime_error(path + ": empty mapping");
  }
  return mapping;
}

Discretizer parse_discretizer(const std::string& name) {
  if (name == "hungarian") return Discretizer::hungarian;
  if (name == "greedy") return Discretizer::greedy;
  throw CLI::ValidationError("unknown discretizer '" + name + "'");
}

void summarize_betas(const std::vector<double>& trace, RunReport& report) {
  if (trace.empty()) return;
  report.beta_min = *std::min_element(trace.begin(), trace.end());
  report.beta_max = *std::max_element(trace.begin(), trace.end());
  report.beta_final = trace.back();
}

struct MatchOptions {
  std::string graph_a, graph_b;
  std::string features_a, features_b;
  std::string truth;
  std::string out_path;
  std::string projection = "asm";
  std::string discretizer = "hungarian";
  bool weighted = false;
  double lambda = 1.0;
  double eps = 1e-2;
  double outer_tol = 1e-4;
  int max_iters = 100;
};

int run_match(const MatchOptions& opt, std::ostream& out, std::ostream& err) {
  Graph a = load_edge_list(opt.graph_a, opt.weighted);
  Graph b = load_edge_list(opt.graph_b, opt.weighted);
  if (!opt.features_a.empty()) {
    a = Graph(a.adjacency(), read_matrix_csv(opt.features_a));
  }
  if (!opt.features_b.empty()) {
    b = Graph(b.adjacency(), read_matrix_csv(opt.features_b));
  }

  MatchingProblem problem(std::move(a), std::move(b), opt.lambda);

  AsmConfig config;
  config.lambda = opt.lambda;
  config.eps = opt.eps;
  config.outer_tol = opt.outer_tol;
  config.max_outer_iters = opt.max_iters;
  config.discretizer = parse_discretizer(opt.discretizer);
  std::string method_label;
  apply_projection_method(opt.projection, config, method_label);

  const MatchResult result = asm_match(problem, config);

  RunReport report;
  report.instance = opt.graph_a + "|" + opt.graph_b;
  report.n = problem.g().size();
  report.n_tilde = problem.g_tilde().size();
  report.method = method_label;
  report.matching_error = result.matching_error;
  report.objective = result.objective_score;
  report.iters = result.iterations;
  report.time_s = result.elapsed_seconds;
  summarize_betas(result.beta_trace, report);

  std::ostringstream cfg;
  cfg << "match|graph_a=" << opt.graph_a << "|graph_b=" << opt.graph_b
      << "|weighted=" << opt.weighted << "|features_a=" << opt.features_a
      << "|features_b=" << opt.features_b << "|lambda=" << opt.lambda
      << "|projection=" << opt.projection << "|eps=" << opt.eps
      << "|outer_tol=" << opt.outer_tol << "|max_iters=" << opt.max_iters
      << "|discretizer=" << opt.discretizer;
  report.config_hash = config_hash(cfg.str());

  if (!opt.truth.empty()) {
    const std::vector<Eigen::Index> truth = load_mapping_file(opt.truth);
    report.accuracy = node_accuracy(result.mapping, truth);
  }

  nlohmann::json doc;
  doc["mapping"] = result.mapping;
  doc["swapped"] = problem.swapped();
  doc["beta_trace"] = result.beta_trace;
  doc["converged"] = result.converged;
  doc["report"] = to_json(report);

  if (opt.out_path.empty()) {
    out << doc.dump(2) << '\n';
  } else {
    std::ofstream f(opt.out_path);
    if (!f) {
      throw std::runtime_error("cannot write report: " + opt.out_path);
    }
    f << doc.dump(2) << '\n';
  }

  if (report.accuracy) {
    err << "accuracy=" << format_double(*report.accuracy);
  } else {
    err << "accuracy=n/a";
  }
  err << " matching_error=" << format_double(report.matching_error)
      << " objective=" << format_double(report.objective) << " iters=" << report.iters
      << " time_s=" << format_double(report.time_s) << '\n';
  return 0;
}

struct BenchOptions {
  Eigen::Index n = 100;
  double density = 0.1;
  std::string noises = "0.0";
  int seeds = 10;
  std::string methods = "asm";
  std::string csv_path;
  double lambda = 1.0;
  double eps = 1e-2;
  std::string discretizer = "hungarian";
};

int run_bench_cmd(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
  BenchSpec spec;
  spec.n = opt.n;
  spec.density = opt.density;
  spec.noises = parse_double_list(opt.noises);
  spec.seeds = opt.seeds;
  spec.methods = parse_string_list(opt.methods);
  spec.lambda = opt.lambda;
  spec.eps = opt.eps;
  spec.discretizer = parse_discretizer(opt.discretizer);

  const std::vector<BenchRecord> records = run_bench(spec);

  std::ofstream file;
  std::ostream* dst = &out;
  if (!opt.csv_path.empty()) {
    file.open(opt.csv_path);
    if (!file) {
      throw std::runtime_error("cannot write CSV: " + opt.csv_path);
    }
    dst = &file;
  }
  *dst << kCsvHeader << '\n';
  for (const BenchRecord& rec : records) {
    *dst << csv_row(rec.report) << '\n';
  }

  double mean_acc = 0.0, mean_time = 0.0;
  for (const BenchRecord& rec : records) {
    mean_acc += rec.report.accuracy.value_or(0.0);
    mean_time += rec.report.time_s;
  }
  const double count = static_cast<double>(records.size());
  err << "cells=" << records.size() << " mean_accuracy=" << format_double(mean_acc / count)
      << " mean_time_s=" << format_double(mean_time / count) << '\n';
  return 0;
}

struct SoftassignOptions {
  std::string scores;
  double eps = 1e-2;
  double beta0 = 0.0;       // 0: default to ln(n)
  double delta_beta = 0.0;  // 0: default to ln(n)
  int max_steps = 50;
  double tol = kDefaultBalanceTol;
  bool compare_direct = false;
};

int run_softassign_cmd(const SoftassignOptions& opt, std::ostream& out, std::ostream&) {
  const Eigen::MatrixXd X = read_matrix_csv(opt.scores);
  if (X.rows() != X.cols()) {
    throw std::runtime_error("scores must form a square matrix");
  }

  AdaptiveParams params = adaptive_defaults(X.rows());
  if (opt.beta0 > 0.0) params.beta0 = opt.beta0;
  if (opt.delta_beta > 0.0) params.delta_beta = opt.delta_beta;
  params.eps = opt.eps;
  params.max_steps = opt.max_steps;

  const auto t0 = std::chrono::steady_clock::now();
  const SoftassignOutput result = adaptive_softassign(X, params, opt.tol);
  const double adaptive_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  out << "beta_eps=" << format_double(result.beta) << '\n';
  out << "residuals=";
  for (std::size_t i = 0; i < result.residual_trace.size(); ++i) {
    if (i) out << ',';
    out << format_double(result.residual_trace[i]);
  }
  out << '\n';
  out << "sinkhorn_iters=" << result.total_sinkhorn_iters << '\n';
  out << "transitions=" << result.transitions_taken << '\n';
  out << "converged=" << (result.converged ? "true" : "false") << '\n';

  if (opt.compare_direct) {
    const auto t1 = std::chrono::steady_clock::now();
    const SoftassignOutput direct = softassign(X, result.beta, opt.tol);
    const double direct_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
    out << "compare_direct_max_diff="
        << format_double((result.S - direct.S).cwiseAbs().maxCoeff()) << '\n';
    out << "adaptive_time_s=" << format_double(adaptive_time) << '\n';
    out << "direct_time_s=" << format_double(direct_time) << '\n';
  }

  out << "S=" << '\n';
  write_matrix_csv(result.S, out);
  return 0;
}

struct OtOptions {
  std::string cost;
  std::string a_path, b_path;
  double beta = 1.0;
  double transition_from = 0.0;  // 0: direct solve at beta
  double tol = kDefaultBalanceTol;
};

int run_ot_cmd(const OtOptions& opt, std::ostream& out, std::ostream& err) {
  const Eigen::MatrixXd C = read_matrix_csv(opt.cost);
  const Eigen::Index n = C.rows();
  const Eigen::Index m = C.cols();

  Eigen::VectorXd a = opt.a_path.empty()
                          ? Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n))
                          : read_vector_csv(opt.a_path);
  Eigen::VectorXd b = opt.b_path.empty()
                          ? Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m))
                          : read_vector_csv(opt.b_path);

  TransportPlan plan;
  if (opt.transition_from > 0.0) {
    TransportProblem staged(C, a, b, opt.transition_from);
    plan = ot_transition(entropic_ot(staged, opt.tol), opt.beta, opt.tol);
  } else {
    TransportProblem problem(C, a, b, opt.beta);
    plan = entropic_ot(problem, opt.tol);
  }

  write_matrix_csv(plan.T, out);
  err << "transport_cost=" << format_double(plan.T.cwiseProduct(C).sum())
      << " entropy=" << format_double(plan_entropy(plan.T))
      << " sinkhorn_iters=" << plan.iterations
      << " residual=" << format_double(plan.residual) << '\n';
  return 0;
}

}  // namespace

void apply_projection_method(const std::string& method, AsmConfig& config,
                             std::string& method_label) {
  if (method == "asm") {
    config.fixed_beta.reset();
    method_label = "asm";
    return;
  }
  if (method.rfind("fixed:", 0) == 0) {
    const std::string value = method.substr(6);
    try {
      std::size_t pos = 0;
      const double beta = std::stod(value, &pos);
      if (pos != value.size() || !(beta > 0.0)) throw std::invalid_argument(value);
      config.fixed_beta = beta;
    } catch (const std::exception&) {
      throw CLI::ValidationError("bad fixed projection '" + method +
                                 "'; expected fixed:<positive beta>");
    }
    method_label = "fixed_beta";
    return;
  }
  throw CLI::ValidationError("unknown projection method '" + method +
                             "'; expected asm or fixed:<beta>");
}

std::vector<BenchRecord> run_bench(const BenchSpec& spec) {
  if (spec.seeds < 1) {
    throw std::invalid_argument("seeds must be at least 1");
  }

  std::ostringstream cfg;
  cfg << "bench|n=" << spec.n << "|density=" << spec.density << "|noises=";
  for (double v : spec.noises) cfg << v << ';';
  cfg << "|seeds=" << spec.seeds << "|methods=";
  for (const std::string& s : spec.methods) cfg << s << ';';
  cfg << "|lambda=" << spec.lambda << "|eps=" << spec.eps
      << "|discretizer=" << (spec.discretizer == Discretizer::hungarian ? "hungarian" : "greedy");
  const std::string hash = config_hash(cfg.str());

  std::vector<double> noises = spec.noises;
  std::sort(noises.begin(), noises.end());

  std::vector<BenchRecord> records;
  for (const double noise : noises) {
    for (const std::string& method : spec.methods) {
      AsmConfig config;
      config.lambda = spec.lambda;
      config.eps = spec.eps;
      config.discretizer = spec.discretizer;
      std::string method_label;
      apply_projection_method(method, config, method_label);

      for (int seed = 0; seed < spec.seeds; ++seed) {
        const NoisyPair pair =
            generate_noisy_pair(spec.n, spec.density, noise, static_cast<std::uint64_t>(seed));
        MatchingProblem problem(pair.g, pair.g_tilde, spec.lambda);
        MatchResult result = asm_match(problem, config);

        BenchRecord rec;
        char instance[128];
        std::snprintf(instance, sizeof(instance), "er%lld_d%g_k%g_s%d",
                      static_cast<long long>(spec.n), spec.density, noise, seed);
        rec.report.instance = instance;
        rec.report.seed = static_cast<std::uint64_t>(seed);
        rec.report.n = problem.g().size();
        rec.report.n_tilde = problem.g_tilde().size();
        rec.report.noise = noise;
        rec.report.method = method_label;
        rec.report.accuracy = node_accuracy(result.mapping, pair.ground_truth);
        rec.report.matching_error = result.matching_error;
        rec.report.objective = result.objective_score;
        rec.report.iters = result.iterations;
        rec.report.time_s = result.elapsed_seconds;
        rec.report.config_hash = hash;
        summarize_betas(result.beta_trace, rec.report);
        rec.result = std::move(result);
        records.push_back(std::move(rec));
      }
    }
  }
  return records;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"adaptive softassign graph matching"};
  app.require_subcommand(1);

  MatchOptions match_opt;
  CLI::App* match = app.add_subcommand("match", "align two graphs from edge lists");
  match->add_option("--graph-a", match_opt.graph_a, "edge list of the first graph")->required();
  match->add_option("--graph-b", match_opt.graph_b, "edge list of the second graph")->required();
  match->add_flag("--weighted", match_opt.weighted, "read third-column edge weights");
  match->add_option("--features-a", match_opt.features_a, "node feature CSV for graph A");
  match->add_option("--features-b", match_opt.features_b, "node feature CSV for graph B");
  match->add_option("--lambda", match_opt.lambda, "feature similarity weight");
  match->add_option("--truth", match_opt.truth, "ground-truth mapping file");
  match->add_option("--projection", match_opt.projection, "asm or fixed:<beta>");
  match->add_option("--eps", match_opt.eps, "adaptive projection threshold");
  match->add_option("--outer-tol", match_opt.outer_tol, "outer loop convergence tolerance");
  match->add_option("--max-iters", match_opt.max_iters, "outer iteration cap");
  match->add_option("--discretizer", match_opt.discretizer, "hungarian or greedy");
  match->add_option("--out", match_opt.out_path, "write the JSON report here");

  BenchOptions bench_opt;
  CLI::App* bench = app.add_subcommand("bench", "synthetic noisy-pair benchmark");
  bench->add_option("--n", bench_opt.n, "nodes per graph");
  bench->add_option("--density", bench_opt.density, "edge density in (0,1)");
  bench->add_option("--noise", bench_opt.noises, "comma-separated noise levels");
  bench->add_option("--seeds", bench_opt.seeds, "number of seeds (0..k-1)");
  bench->add_option("--methods", bench_opt.methods, "comma-separated: asm, fixed:<beta>");
  bench->add_option("--csv", bench_opt.csv_path, "write rows here instead of stdout");
  bench->add_option("--lambda", bench_opt.lambda, "feature similarity weight");
  bench->add_option("--eps", bench_opt.eps, "adaptive projection threshold");
  bench->add_option("--discretizer", bench_opt.discretizer, "hungarian or greedy");

  SoftassignOptions soft_opt;
  CLI::App* soft = app.add_subcommand("softassign", "adaptive relaxation of a score matrix");
  soft->add_option("--scores", soft_opt.scores, "square score matrix CSV")->required();
  soft->add_option("--eps", soft_opt.eps, "residual threshold");
  soft->add_option("--beta0", soft_opt.beta0, "initial inflation (default ln n)");
  soft->add_option("--delta-beta", soft_opt.delta_beta, "inflation increment (default ln n)");
  soft->add_option("--max-steps", soft_opt.max_steps, "transition cap");
  soft->add_option("--tol", soft_opt.tol, "balancing tolerance");
  soft->add_flag("--compare-direct", soft_opt.compare_direct,
                 "also recompute at the final beta from scratch");

  OtOptions ot_opt;
  CLI::App* ot = app.add_subcommand("ot", "entropic optimal transport plan");
  ot->add_option("--cost", ot_opt.cost, "cost matrix CSV")->required();
  ot->add_option("--a", ot_opt.a_path, "row marginal CSV (default uniform)");
  ot->add_option("--b", ot_opt.b_path, "column marginal CSV (default uniform)");
  ot->add_option("--beta", ot_opt.beta, "inflation")->required();
  ot->add_option("--transition-from", ot_opt.transition_from,
                 "solve at this beta first, then transition");
  ot->add_option("--tol", ot_opt.tol, "balancing tolerance");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (match->parsed()) return run_match(match_opt, out, err);
    if (bench->parsed()) return run_bench_cmd(bench_opt, out, err);
    if (soft->parsed()) return run_softassign_cmd(soft_opt, out, err);
    if (ot->parsed()) return run_ot_cmd(ot_opt, out, err);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace asmatch::cli
