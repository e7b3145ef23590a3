#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

namespace asmatch {

// Header-free comma-separated numeric matrix, one row per line. Every row
// must have the same number of fields.
Eigen::MatrixXd read_matrix_csv(const std::string& path);

// Writes with round-trip precision ("%.17g").
void write_matrix_csv(const Eigen::MatrixXd& M, const std::string& path);
void write_matrix_csv(const Eigen::MatrixXd& M, std::ostream& out);

// Accepts an n x 1 or 1 x n CSV and returns it as a vector.
Eigen::VectorXd read_vector_csv(const std::string& path);

}  // namespace asmatch
