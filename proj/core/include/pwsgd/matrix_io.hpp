#pragma once

#include "pwsgd/linalg.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace pwsgd {

/// Matrix Market "coordinate real general" (and "pattern"/"integer", "symmetric") reader.
SparseMatrix read_matrix_market(std::istream& in);
SparseMatrix read_matrix_market(const std::string& path);

/// Writes "%%MatrixMarket matrix coordinate real general" with 1-based indices.
void write_matrix_market(std::ostream& out, const SparseMatrix& m);
void write_matrix_market(const std::string& path, const SparseMatrix& m);

/// Plain comma-separated numbers, one matrix row per line. A first line with a
/// non-numeric field is treated as a header and skipped.
DenseMatrix read_dense_csv(std::istream& in);
DenseMatrix read_dense_csv(const std::string& path);

void write_dense_csv(std::ostream& out, const DenseMatrix& m);
void write_dense_csv(const std::string& path, const DenseMatrix& m);

void write_vector_csv(const std::string& path, const Vector& v);
Vector read_vector_csv(const std::string& path);

/// Splits one CSV line; trims surrounding whitespace of each field.
std::vector<std::string> split_csv_line(const std::string& line);

/// Parses a full-field double; returns false if the field is not numeric.
bool parse_double(const std::string& field, double& out);

}  // namespace pwsgd
