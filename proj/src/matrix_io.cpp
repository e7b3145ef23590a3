#include "asmatch/matrix_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace asmatch {

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open matrix file: " + path);
  }

  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        std::size_t pos = 0;
        const double v = std::stod(field, &pos);
        while (pos < field.size() && std::isspace(static_cast<unsigned char>(field[pos]))) ++pos;
        if (pos != field.size()) {
          throw std::invalid_argument(field);
        }
        row.push_back(v);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": not a number: '" + field + "'");
      }
    }
    if (row.empty()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": empty row");
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": inconsistent column count");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw std::runtime_error(path + ": empty matrix");
  }

  Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      M(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return M;
}

void write_matrix_csv(const Eigen::MatrixXd& M, std::ostream& out) {
  char buf[64];
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", M(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

void write_matrix_csv(const Eigen::MatrixXd& M, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write matrix file: " + path);
  }
  write_matrix_csv(M, out);
}

Eigen::VectorXd read_vector_csv(const std::string& path) {
  const Eigen::MatrixXd M = read_matrix_csv(path);
  if (M.cols() == 1) return M.col(0);
  if (M.rows() == 1) return M.row(0).transpose();
  throw std::runtime_error(path + ": expected a single row or column");
}

}  // namespace asmatch
