#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "asmatch/matcher.hpp"
#include "report.hpp"

namespace asmatch::cli {

// One synthetic benchmark sweep: seeds 0..seeds-1 for every (noise, method)
// cell. Methods are "asm" or "fixed:<beta>".
struct BenchSpec {
  Eigen::Index n = 100;
  double density = 0.1;
  std::vector<double> noises = {0.0};
  int seeds = 10;
  std::vector<std::string> methods = {"asm"};
  double lambda = 1.0;
  double eps = 1e-2;
  Discretizer discretizer = Discretizer::hungarian;
};

struct BenchRecord {
  RunReport report;
  MatchResult result;  // keeps the traces for invariant checks
};

// Runs every cell sequentially in deterministic order: noise ascending,
// then methods in the given order, then seed ascending.
std::vector<BenchRecord> run_bench(const BenchSpec& spec);

// Parses "asm" / "fixed:<beta>" into a partially filled AsmConfig.
void apply_projection_method(const std::string& method, AsmConfig& config,
                             std::string& method_label);

// Entry point used by main(); returns the process exit code
// (0 success, 1 usage or input error, 2 numerical failure).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace asmatch::cli
