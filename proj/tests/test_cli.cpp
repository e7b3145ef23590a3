#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "asmatch/matrix_io.hpp"
#include "cli/commands.hpp"
#include "json.hpp"

using namespace asmatch;
using cli::run_cli;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content = "") {
    path = (std::filesystem::temp_directory_path() / name).string();
    if (!content.empty()) {
      std::ofstream out(path);
      out << content;
    }
  }
  ~TempFile() { std::remove(path.c_str()); }
};

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Drops the trailing time_s field of every CSV line.
std::string strip_times(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    const auto comma = line.rfind(',');
    out << line.substr(0, comma) << '\n';
  }
  return out.str();
}

void write_identity_truth(const std::string& path, int n) {
  std::ofstream out(path);
  for (int i = 0; i < n; ++i) out << i << '\n';
}

const std::string kPathGraph = "0 1\n1 2\n2 3\n3 4\n4 5\n0 5\n1 4\n";

}  // namespace

TEST_CASE("match: a graph against itself with identity truth") {
  TempFile graph("asmatch_cli_self.txt", kPathGraph);
  TempFile truth("asmatch_cli_truth.txt");
  write_identity_truth(truth.path, 6);
  TempFile report("asmatch_cli_report.json");

  const CliResult r = run({"match", "--graph-a", graph.path, "--graph-b", graph.path, "--truth",
                           truth.path, "--out", report.path});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("accuracy=1") != std::string::npos);

  const nlohmann::json doc = nlohmann::json::parse(read_file(report.path));
  CHECK(doc["report"]["accuracy"].get<double>() == doctest::Approx(1.0));
  CHECK(doc["report"]["matching_error"].get<double>() == doctest::Approx(0.0));
  CHECK(doc["report"]["method"] == "asm");
  CHECK(doc["mapping"].size() == 6);
  CHECK(doc["swapped"] == false);
  CHECK(doc["report"]["config_hash"].get<std::string>().size() == 16);
}

TEST_CASE("match: JSON goes to stdout without --out") {
  TempFile graph("asmatch_cli_stdout.txt", kPathGraph);
  const CliResult r = run({"match", "--graph-a", graph.path, "--graph-b", graph.path});
  REQUIRE(r.code == 0);
  const nlohmann::json doc = nlohmann::json::parse(r.out);
  CHECK(doc["report"]["accuracy"].is_null());
  CHECK(r.err.find("accuracy=n/a") != std::string::npos);
}

TEST_CASE("match: fixed projection is labeled fixed_beta") {
  TempFile graph("asmatch_cli_fixed.txt", kPathGraph);
  const CliResult r = run(
      {"match", "--graph-a", graph.path, "--graph-b", graph.path, "--projection", "fixed:4.6"});
  REQUIRE(r.code == 0);
  const nlohmann::json doc = nlohmann::json::parse(r.out);
  CHECK(doc["report"]["method"] == "fixed_beta");
  CHECK(doc["report"]["beta_final"].get<double>() == doctest::Approx(4.6));
}

TEST_CASE("match: usage and input failures exit 1") {
  CHECK(run({"match", "--graph-a", "/nonexistent/a.txt", "--graph-b", "/nonexistent/b.txt"})
            .code == 1);
  CHECK(run({"match"}).code == 1);
  CHECK(run({"unknown-command"}).code == 1);
  TempFile graph("asmatch_cli_badproj.txt", kPathGraph);
  CHECK(run({"match", "--graph-a", graph.path, "--graph-b", graph.path, "--projection",
             "fixed:-1"})
            .code == 1);
}

TEST_CASE("bench: deterministic rows, exact header, perfect clean recovery") {
  TempFile csv_a("asmatch_cli_bench_a.csv");
  TempFile csv_b("asmatch_cli_bench_b.csv");
  const std::vector<std::string> args{"bench", "--n",       "20",     "--density", "0.3",
                                      "--noise", "0.0",     "--seeds", "2",         "--methods",
                                      "asm,fixed:3.0"};
  auto with_csv = [&](const std::string& path) {
    std::vector<std::string> full = args;
    full.push_back("--csv");
    full.push_back(path);
    return run(full);
  };
  REQUIRE(with_csv(csv_a.path).code == 0);
  REQUIRE(with_csv(csv_b.path).code == 0);

  const std::string body_a = read_file(csv_a.path);
  CHECK(body_a.rfind("instance,seed,n,n_tilde,noise,method,accuracy,matching_error,objective,"
                     "iters,beta_final,time_s\n",
                     0) == 0);
  // 1 noise x 2 methods x 2 seeds = 4 rows + header
  int lines = 0;
  for (const char c : body_a) {
    if (c == '\n') ++lines;
  }
  CHECK(lines == 5);
  CHECK(strip_times(body_a) == strip_times(read_file(csv_b.path)));

  std::istringstream rows(body_a);
  std::string line;
  std::getline(rows, line);  // header
  while (std::getline(rows, line)) {
    // accuracy is the 7th field; clean pairs at this size are always solved
    std::istringstream fields(line);
    std::string field;
    for (int i = 0; i < 7; ++i) std::getline(fields, field, ',');
    CHECK(field == "1");
  }
}

TEST_CASE("bench: rows go to stdout without --csv") {
  const CliResult r = run({"bench", "--n", "12", "--density", "0.4", "--noise", "0.0", "--seeds",
                           "1", "--methods", "asm"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("instance,seed,", 0) == 0);
  CHECK(r.err.find("cells=1") != std::string::npos);
}

TEST_CASE("softassign: relaxes a score matrix and prints the trace") {
  Eigen::MatrixXd X(3, 3);
  X << 1.0, 0.9, 0.9, 0.9, 1.0, 0.5, 0.6, 0.25, 1.0;
  TempFile scores("asmatch_cli_scores.csv");
  write_matrix_csv(X, scores.path);

  const CliResult r = run({"softassign", "--scores", scores.path, "--eps", "1e-3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("beta_eps=") != std::string::npos);
  CHECK(r.out.find("residuals=") != std::string::npos);
  CHECK(r.out.find("sinkhorn_iters=") != std::string::npos);
  CHECK(r.out.find("converged=true") != std::string::npos);

  // The matrix after "S=" is close to the identity for these scores.
  const auto pos = r.out.find("S=\n");
  REQUIRE(pos != std::string::npos);
  TempFile s_csv("asmatch_cli_s.csv", r.out.substr(pos + 3));
  const Eigen::MatrixXd S = read_matrix_csv(s_csv.path);
  CHECK((S - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 0.05);
}

TEST_CASE("softassign: a huge eps stops after one transition") {
  Eigen::MatrixXd X(3, 3);
  X << 1.0, 0.9, 0.9, 0.9, 1.0, 0.5, 0.6, 0.25, 1.0;
  TempFile scores("asmatch_cli_scores2.csv");
  write_matrix_csv(X, scores.path);
  const CliResult r = run({"softassign", "--scores", scores.path, "--eps", "100"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("transitions=1\n") != std::string::npos);
}

TEST_CASE("softassign: compare-direct reports agreement and timings") {
  TempFile scores("asmatch_cli_scores3.csv");
  Eigen::MatrixXd X(4, 4);
  X << 0.1, 0.7, 0.3, 0.2, 0.9, 0.4, 0.8, 0.1, 0.5, 0.2, 0.6, 0.7, 0.3, 0.8, 0.2, 0.9;
  write_matrix_csv(X, scores.path);
  const CliResult r =
      run({"softassign", "--scores", scores.path, "--eps", "1e-2", "--compare-direct"});
  REQUIRE(r.code == 0);
  const auto pos = r.out.find("compare_direct_max_diff=");
  REQUIRE(pos != std::string::npos);
  const double diff = std::stod(r.out.substr(pos + 24));
  CHECK(diff <= 1e-6);
  CHECK(r.out.find("adaptive_time_s=") != std::string::npos);
  CHECK(r.out.find("direct_time_s=") != std::string::npos);
}

TEST_CASE("softassign: non-square scores exit 1, overflow exits 2") {
  TempFile rect("asmatch_cli_rect.csv", "1,2,3\n4,5,6\n");
  CHECK(run({"softassign", "--scores", rect.path}).code == 1);

  TempFile square("asmatch_cli_square.csv", "1,2\n3,4\n");
  CHECK(run({"softassign", "--scores", square.path, "--beta0", "1000"}).code == 2);
}

TEST_CASE("ot: constant cost with uniform marginals is the product coupling") {
  TempFile cost("asmatch_cli_cost.csv", "2,2,2\n2,2,2\n");
  const CliResult r = run({"ot", "--cost", cost.path, "--beta", "4"});
  REQUIRE(r.code == 0);
  TempFile plan_csv("asmatch_cli_plan.csv", r.out);
  const Eigen::MatrixXd T = read_matrix_csv(plan_csv.path);
  CHECK(T.rows() == 2);
  CHECK(T.cols() == 3);
  CHECK((T.array() - 1.0 / 6.0).abs().maxCoeff() <= 1e-9);
  CHECK(r.err.find("transport_cost=") != std::string::npos);
  CHECK(r.err.find("entropy=") != std::string::npos);
}

TEST_CASE("ot: staged transition matches the direct solve") {
  TempFile cost("asmatch_cli_cost2.csv", "0,1,0.5\n1,0,0.2\n0.3,0.8,0\n");
  const CliResult direct = run({"ot", "--cost", cost.path, "--beta", "8", "--tol", "1e-11"});
  const CliResult staged = run({"ot", "--cost", cost.path, "--beta", "8", "--transition-from",
                                "2", "--tol", "1e-11"});
  REQUIRE(direct.code == 0);
  REQUIRE(staged.code == 0);
  TempFile d_csv("asmatch_cli_plan_d.csv", direct.out);
  TempFile s_csv("asmatch_cli_plan_s.csv", staged.out);
  const Eigen::MatrixXd D = read_matrix_csv(d_csv.path);
  const Eigen::MatrixXd S = read_matrix_csv(s_csv.path);
  CHECK((D - S).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("ot: custom marginals are honored; bad ones exit 1") {
  TempFile cost("asmatch_cli_cost3.csv", "0,1\n1,0\n");
  TempFile a("asmatch_cli_a.csv", "0.25\n0.75\n");
  TempFile b("asmatch_cli_b.csv", "0.5\n0.5\n");
  const CliResult r = run(
      {"ot", "--cost", cost.path, "--a", a.path, "--b", b.path, "--beta", "3"});
  REQUIRE(r.code == 0);
  TempFile plan_csv("asmatch_cli_plan3.csv", r.out);
  const Eigen::MatrixXd T = read_matrix_csv(plan_csv.path);
  CHECK(T.row(0).sum() == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(T.row(1).sum() == doctest::Approx(0.75).epsilon(1e-8));

  TempFile bad_a("asmatch_cli_bad_a.csv", "0.25\n0.25\n0.5\n");
  CHECK(run({"ot", "--cost", cost.path, "--a", bad_a.path, "--beta", "3"}).code == 1);
  TempFile nonsum("asmatch_cli_nonsum.csv", "0.6\n0.6\n");
  CHECK(run({"ot", "--cost", cost.path, "--a", nonsum.path, "--beta", "3"}).code == 1);
}

TEST_CASE("csv escaping quotes embedded separators") {
  CHECK(cli::csv_escape("plain") == "plain");
  CHECK(cli::csv_escape("a,b") == "\"a,b\"");
  CHECK(cli::csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(cli::csv_escape("line\nbreak") == "\"line\nbreak\"");
}

TEST_CASE("help exits 0") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"match", "--help"}).code == 0);
}
