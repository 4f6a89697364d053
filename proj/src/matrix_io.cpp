#include "cwy/linalg.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace cwy {

Matrix read_matrix(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorKind::InvalidInput, "missing matrix header");
  std::istringstream hs(header);
  long long rows = -1;
  long long cols = -1;
  if (!(hs >> rows >> cols) || rows < 0 || cols < 0) {
    throw Error(ErrorKind::InvalidInput, "header must be 'rows cols'");
  }
  std::string rest;
  if (hs >> rest) throw Error(ErrorKind::InvalidInput, "trailing tokens in header");

  Matrix m(rows, cols);
  std::string line;
  for (long long i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) {
      throw Error(ErrorKind::InvalidInput, "expected " + std::to_string(rows) + " rows");
    }
    std::istringstream ls(line);
    for (long long j = 0; j < cols; ++j) {
      double value = 0.0;
      if (!(ls >> value)) {
        throw Error(ErrorKind::InvalidInput, "row " + std::to_string(i) + " is short");
      }
      if (!std::isfinite(value)) {
        throw Error(ErrorKind::InvalidInput, "non-finite entry at row " + std::to_string(i));
      }
      m(i, j) = value;
    }
    if (ls >> rest) throw Error(ErrorKind::InvalidInput, "row " + std::to_string(i) + " is long");
  }
  return m;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const Matrix& m) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << m.rows() << ' ' << m.cols() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j != 0) out << ' ';
      out << m(i, j);
    }
    out << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace cwy
