#pragma once

#include <iosfwd>
#include <string>

#include "symnmf/matrix.hpp"

namespace symnmf {

enum class MatrixMarketLayout { Array, Coordinate };

struct MatrixMarketWriteOptions {
  MatrixMarketLayout layout = MatrixMarketLayout::Array;
  /// Write only the lower triangle under the "symmetric" tag. The matrix must
  /// be exactly symmetric.
  bool symmetric = false;
  /// Significant digits for values; 17 round-trips every double.
  int precision = 17;  ///< significant digits, 15..17
};

/// Reads a real/integer/pattern MatrixMarket matrix in array or coordinate
/// layout into dense storage. "symmetric" and "skew-symmetric" files are
/// expanded to the full matrix. Throws IoError on malformed input.
DenseMatrix read_matrix_market(std::istream& in);
DenseMatrix read_matrix_market(const std::string& path);

void write_matrix_market(std::ostream& out, const DenseMatrix& m,
                         const MatrixMarketWriteOptions& options = {});
void write_matrix_market(const std::string& path, const DenseMatrix& m,
                         const MatrixMarketWriteOptions& options = {});

}  // namespace symnmf
