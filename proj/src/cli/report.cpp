#include "report.hpp"

#include <cstdio>

namespace asmatch::cli {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(const RunReport& r) {
  std::string row;
  row += csv_escape(r.instance);
  row += ',';
  row += std::to_string(r.seed);
  row += ',';
  row += std::to_string(r.n);
  row += ',';
  row += std::to_string(r.n_tilde);
  row += ',';
  row += format_double(r.noise);
  row += ',';
  row += csv_escape(r.method);
  row += ',';
  row += r.accuracy ? format_double(*r.accuracy) : std::string();
  row += ',';
  row += format_double(r.matching_error);
  row += ',';
  row += format_double(r.objective);
  row += ',';
  row += std::to_string(r.iters);
  row += ',';
  row += format_double(r.beta_final);
  row += ',';
  row += format_double(r.time_s);
  return row;
}

nlohmann::json to_json(const RunReport& r) {
  nlohmann::json j{
      {"instance", r.instance},
      {"seed", r.seed},
      {"n", r.n},
      {"n_tilde", r.n_tilde},
      {"noise", r.noise},
      {"method", r.method},
      {"matching_error", r.matching_error},
      {"objective", r.objective},
      {"iters", r.iters},
      {"beta_min", r.beta_min},
      {"beta_max", r.beta_max},
      {"beta_final", r.beta_final},
      {"time_s", r.time_s},
      {"config_hash", r.config_hash},
  };
  if (r.accuracy) {
    j["accuracy"] = *r.accuracy;
  } else {
    j["accuracy"] = nullptr;
  }
  return j;
}

std::string config_hash(const std::string& canonical_config) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical_config) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace asmatch::cli
