#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace asmatch::cli {

// One matching run, flattened for CSV and JSON reporting.
struct RunReport {
  std::string instance;
  std::uint64_t seed = 0;
  Eigen::Index n = 0;
  Eigen::Index n_tilde = 0;
  double noise = 0.0;
  std::string method;
  std::optional<double> accuracy;  // only when ground truth is known
  double matching_error = 0.0;
  double objective = 0.0;
  int iters = 0;
  double beta_min = 0.0;
  double beta_max = 0.0;
  double beta_final = 0.0;
  double time_s = 0.0;
  std::string config_hash;
};

inline constexpr const char* kCsvHeader =
    "instance,seed,n,n_tilde,noise,method,accuracy,matching_error,objective,iters,beta_final,"
    "time_s";

// Shortest decimal form that round-trips a double.
std::string format_double(double v);

// RFC 4180: quotes fields containing commas, quotes, or newlines.
std::string csv_escape(const std::string& field);

std::string csv_row(const RunReport& r);
nlohmann::json to_json(const RunReport& r);

// FNV-1a over the canonical flag string, as 16 hex digits.
std::string config_hash(const std::string& canonical_config);

}  // namespace asmatch::cli
