#include "pwsgd/matrix_io.hpp"

#include "pwsgd/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <vector>

namespace pwsgd {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

bool parse_double(const std::string& field, double& out) {
  const std::string t = trim(field);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (*first == '+') ++first;
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  long lineno = 0;
  if (!std::getline(in, line)) throw ParseError("matrix market: empty input", 1);
  ++lineno;
  std::istringstream banner(lower(line));
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%matrixmarket" || object != "matrix") {
    throw ParseError("matrix market: missing %%MatrixMarket matrix banner", lineno);
  }
  if (format != "coordinate") throw ParseError("matrix market: only coordinate format is supported", lineno);
  if (field != "real" && field != "integer" && field != "pattern" && field != "double") {
    throw ParseError("matrix market: unsupported field '" + field + "'", lineno);
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    throw ParseError("matrix market: unsupported symmetry '" + symmetry + "'", lineno);
  }
  const bool pattern = field == "pattern";
  const bool symmetric = symmetry == "symmetric";

  long rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '%') continue;
    std::istringstream ss(t);
    if (!(ss >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0) {
      throw ParseError("matrix market: malformed size line", lineno);
    }
    break;
  }
  if (rows < 0) throw ParseError("matrix market: missing size line", lineno);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
  std::set<std::pair<long, long>> seen;
  long count = 0;
  while (count < nnz && std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '%') continue;
    std::istringstream ss(t);
    long i = 0, j = 0;
    double v = 1.0;
    if (!(ss >> i >> j) || (!pattern && !(ss >> v))) {
      throw ParseError("matrix market: malformed entry", lineno);
    }
    if (i < 1 || i > rows || j < 1 || j > cols) {
      throw ParseError("matrix market: index out of range", lineno);
    }
    if (!std::isfinite(v)) throw ParseError("matrix market: non-finite value", lineno);
    if (!seen.emplace(i, j).second) throw ParseError("matrix market: duplicate entry", lineno);
    trips.emplace_back(i - 1, j - 1, v);
    if (symmetric && i != j) trips.emplace_back(j - 1, i - 1, v);
    ++count;
  }
  if (count != nnz) throw ParseError("matrix market: fewer entries than declared", lineno);
  SparseMatrix m(rows, cols);
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

SparseMatrix read_matrix_market(const std::string& path) {
  auto in = open_in(path);
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const SparseMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  out << std::setprecision(17);
  for (Index i = 0; i < m.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(m, i); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    }
  }
}

void write_matrix_market(const std::string& path, const SparseMatrix& m) {
  auto out = open_out(path);
  write_matrix_market(out, m);
}

DenseMatrix read_dense_csv(std::istream& in) {
  std::vector<double> values;
  Index cols = -1;
  Index rows = 0;
  std::string line;
  long lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    long bad_col = -1;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (!parse_double(fields[j], row[j]) || !std::isfinite(row[j])) {
        numeric = false;
        bad_col = static_cast<long>(j) + 1;
        break;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw ParseError("csv: non-numeric field '" + fields[bad_col - 1] + "'", lineno, bad_col);
    }
    first = false;
    if (cols < 0) cols = static_cast<Index>(row.size());
    if (static_cast<Index>(row.size()) != cols) {
      throw ParseError("csv: expected " + std::to_string(cols) + " fields, found " +
                           std::to_string(row.size()),
                       lineno);
    }
    values.insert(values.end(), row.begin(), row.end());
    ++rows;
  }
  if (rows == 0) return DenseMatrix(0, 0);
  return Eigen::Map<DenseMatrix>(values.data(), rows, cols);
}

DenseMatrix read_dense_csv(const std::string& path) {
  auto in = open_in(path);
  return read_dense_csv(in);
}

void write_dense_csv(std::ostream& out, const DenseMatrix& m) {
  out << std::setprecision(17);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

void write_dense_csv(const std::string& path, const DenseMatrix& m) {
  auto out = open_out(path);
  write_dense_csv(out, m);
}

void write_vector_csv(const std::string& path, const Vector& v) {
  DenseMatrix m = v;
  write_dense_csv(path, m);
}

Vector read_vector_csv(const std::string& path) {
  const DenseMatrix m = read_dense_csv(path);
  if (m.cols() != 1 && m.rows() != 1) throw ParseError("csv: expected a single column vector in '" + path + "'");
  if (m.cols() == 1) return m.col(0);
  return m.row(0).transpose();
}

}  // namespace pwsgd
