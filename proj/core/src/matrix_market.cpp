#include "symnmf/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "symnmf/error.hpp"

namespace symnmf {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Next line that is neither blank nor a '%' comment.
bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    return true;
  }
  return false;
}

enum class Symmetry { General, Symmetric, SkewSymmetric };

}  // namespace

DenseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("MatrixMarket: empty input");

  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket") throw IoError("MatrixMarket: missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") throw IoError("MatrixMarket: unsupported object '" + object + "'");
  if (field == "complex") throw IoError("MatrixMarket: complex matrices are not supported");
  if (field != "real" && field != "integer" && field != "double" && field != "pattern") {
    throw IoError("MatrixMarket: unsupported field '" + field + "'");
  }

  Symmetry sym = Symmetry::General;
  if (symmetry == "symmetric") {
    sym = Symmetry::Symmetric;
  } else if (symmetry == "skew-symmetric") {
    sym = Symmetry::SkewSymmetric;
  } else if (symmetry != "general") {
    throw IoError("MatrixMarket: unsupported symmetry '" + symmetry + "'");
  }

  if (!next_data_line(in, line)) throw IoError("MatrixMarket: missing size line");
  std::istringstream size_line(line);
  long long rows = 0, cols = 0, nnz = 0;

  if (format == "array") {
    if (field == "pattern") throw IoError("MatrixMarket: pattern field requires coordinate format");
    if (!(size_line >> rows >> cols) || rows <= 0 || cols <= 0) {
      throw IoError("MatrixMarket: bad array size line '" + line + "'");
    }
    if (sym != Symmetry::General && rows != cols) {
      throw IoError("MatrixMarket: symmetric matrix must be square");
    }
    DenseMatrix m = DenseMatrix::Zero(rows, cols);
    for (Index j = 0; j < cols; ++j) {
      const Index first_row = sym == Symmetry::General         ? 0
                              : sym == Symmetry::SkewSymmetric ? j + 1
                                                               : j;
      for (Index i = first_row; i < rows; ++i) {
        double v = 0.0;
        if (!(in >> v)) throw IoError("MatrixMarket: truncated array data");
        m(i, j) = v;
        if (i != j && sym == Symmetry::Symmetric) m(j, i) = v;
        if (sym == Symmetry::SkewSymmetric) m(j, i) = -v;
      }
    }
    return m;
  }

  if (format != "coordinate") throw IoError("MatrixMarket: unsupported format '" + format + "'");
  if (!(size_line >> rows >> cols >> nnz) || rows <= 0 || cols <= 0 || nnz < 0) {
    throw IoError("MatrixMarket: bad coordinate size line '" + line + "'");
  }
  DenseMatrix m = DenseMatrix::Zero(rows, cols);
  for (long long e = 0; e < nnz; ++e) {
    if (!next_data_line(in, line)) throw IoError("MatrixMarket: truncated coordinate data");
    std::istringstream entry(line);
    long long i = 0, j = 0;
    double v = 1.0;
    if (!(entry >> i >> j)) throw IoError("MatrixMarket: bad entry '" + line + "'");
    if (field != "pattern" && !(entry >> v)) {
      throw IoError("MatrixMarket: missing value in '" + line + "'");
    }
    if (i < 1 || i > rows || j < 1 || j > cols) {
      throw IoError("MatrixMarket: index out of range in '" + line + "'");
    }
    m(i - 1, j - 1) += v;
    if (i != j && sym == Symmetry::Symmetric) m(j - 1, i - 1) += v;
    if (i != j && sym == Symmetry::SkewSymmetric) m(j - 1, i - 1) -= v;
  }
  return m;
}

DenseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  try {
    return read_matrix_market(in);
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

void write_matrix_market(std::ostream& out, const DenseMatrix& m,
                         const MatrixMarketWriteOptions& options) {
  if (options.symmetric && (m.rows() != m.cols() || m != m.transpose())) {
    throw InvalidInputError("write_matrix_market: symmetric tag requires an exactly symmetric matrix");
  }
  if (options.precision < 15 || options.precision > 17) {
    throw InvalidInputError("write_matrix_market: precision must be 15..17 significant digits");
  }
  const bool coordinate = options.layout == MatrixMarketLayout::Coordinate;
  out << "%%MatrixMarket matrix " << (coordinate ? "coordinate" : "array") << " real "
      << (options.symmetric ? "symmetric" : "general") << '\n';
  out << std::setprecision(options.precision);

  auto in_storage = [&](Index i, Index j) { return !options.symmetric || i >= j; };

  if (coordinate) {
    long long nnz = 0;
    for (Index j = 0; j < m.cols(); ++j)
      for (Index i = 0; i < m.rows(); ++i)
        if (in_storage(i, j) && m(i, j) != 0.0) ++nnz;
    out << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
    for (Index j = 0; j < m.cols(); ++j)
      for (Index i = 0; i < m.rows(); ++i)
        if (in_storage(i, j) && m(i, j) != 0.0) out << i + 1 << ' ' << j + 1 << ' ' << m(i, j) << '\n';
  } else {
    out << m.rows() << ' ' << m.cols() << '\n';
    for (Index j = 0; j < m.cols(); ++j)
      for (Index i = 0; i < m.rows(); ++i)
        if (in_storage(i, j)) out << m(i, j) << '\n';
  }
  if (!out) throw IoError("write_matrix_market: stream write failed");
}

void write_matrix_market(const std::string& path, const DenseMatrix& m,
                         const MatrixMarketWriteOptions& options) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_matrix_market(out, m, options);
}

}  // namespace symnmf
