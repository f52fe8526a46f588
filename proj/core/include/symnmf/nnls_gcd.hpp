#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "symnmf/matrix.hpp"

namespace symnmf {

struct GcdConfig {
  /// Stop a column once the best available decrease drops below eta * mu.
  double eta = 1e-3;
  /// Per-column cap on corrections; 0 selects 100 * k. Hitting it is flagged,
  /// not fatal.
  int max_corrections_per_column = 0;
};

/// Iterate and maintained gradient g = Q x - cross(:, col) of one column.
struct GcdColumnState {
  DenseVector x;
  DenseVector g;
  std::int64_t corrections = 0;
};

/// Single-coordinate move x_index += step, lowering the objective by `decrease`.
struct CoordinateCorrection {
  Index index = 0;
  double step = 0.0;
  double decrease = 0.0;
};

/// State for column `col` started at x0 (x0 >= 0, size k).
GcdColumnState make_gcd_state(const NnlsSubproblem& sub, Index col, std::span<const double> x0);

/// Best coordinate move: for each i the step is -g_i/q_ii when that keeps
/// x_i >= 0 and -x_i otherwise; the chosen i maximizes the resulting
/// decrease, ties going to the smallest index. Throws RankDeficiencyError when
/// some q_ii <= 0.
CoordinateCorrection best_correction(const GcdColumnState& state, const DenseMatrix& gram);

/// x_i += step and g += step * Q(:, i). A clamping step lands on exactly 0.
void apply_correction(GcdColumnState& state, const DenseMatrix& gram, const CoordinateCorrection& c);

/// Largest single-coordinate decrease available at X0 over every column.
double compute_mu(const NnlsSubproblem& sub, const DenseMatrix& x0);

struct GcdResult {
  DenseMatrix x;                        ///< k x s
  std::int64_t corrections = 0;         ///< total over all columns
  std::vector<Index> capped_columns;    ///< columns that hit the correction cap
  double mu = 0.0;
};

/// Called after every accepted correction with the column, the move, and the
/// column's updated iterate and gradient.
using GcdObserver = std::function<void(Index col, const CoordinateCorrection& c,
                                       std::span<const double> x, std::span<const double> g)>;

/// Greedy coordinate descent over all columns of the subproblem, one column
/// after another. mu is computed once per call from X0.
GcdResult gcd_solve_matrix(const NnlsSubproblem& sub, const DenseMatrix& x0, const GcdConfig& cfg = {},
                           const GcdObserver& observer = {});

}  // namespace symnmf
