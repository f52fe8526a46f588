#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "symnmf/matrix.hpp"

namespace symnmf {

/// Active/passive split of {0..k-1} for one column. Both lists are sorted.
struct IndexPartition {
  std::vector<Index> active;   ///< x_i = 0 candidates
  std::vector<Index> passive;  ///< free variables

  /// Zeros of x0 become active, positive entries passive.
  static IndexPartition from_iterate(std::span<const double> x0);
  /// All indices passive (or active when `passive` is false).
  static IndexPartition uniform(Index k, bool passive);
};

struct BppConfig {
  /// Consecutive full exchanges without a drop in the violation count that are
  /// tolerated before the single-index backup rule engages.
  int max_block_failures = 3;
  /// Per-column exchange cap; 0 selects 5 * k.
  int max_iterations = 0;
  /// Feasibility/gradient tolerance, applied relative to the magnitude of the
  /// passive values and of the right-hand side respectively.
  double tolerance = 1e-12;
};

/// Work counters exposed for benchmarking.
struct BppStats {
  std::int64_t cholesky = 0;            ///< factorizations of restricted Gram matrices
  std::int64_t exchanges = 0;           ///< indices moved between the two sets
  std::int64_t backup_activations = 0;  ///< single-index exchanges
  std::int64_t sweeps = 0;              ///< solve/check rounds

  BppStats& operator+=(const BppStats& o) {
    cholesky += o.cholesky;
    exchanges += o.exchanges;
    backup_activations += o.backup_activations;
    sweeps += o.sweeps;
    return *this;
  }
};

/// Solves Q_PP z = cross_P(col) for the passive set of `part`, with all data
/// gathered from `sub`. Throws RankDeficiencyError if Q_PP is not positive
/// definite and InvalidInputError if the passive set is empty.
DenseVector solve_passive(const NnlsSubproblem& sub, Index col, const IndexPartition& part);

struct KktCheck {
  bool satisfied = false;
  std::vector<Index> passive_violations;  ///< global indices with x_i < -tol
  std::vector<Index> active_violations;   ///< global indices with g_i < -tol
};

/// KKT test for a candidate x* that equals x_passive on the passive set and
/// zero elsewhere: optimal iff x_passive >= 0 and the active gradient >= 0.
KktCheck kkt_satisfied(const IndexPartition& part, std::span<const double> x_passive,
                       std::span<const double> g_active, double tol = 1e-12);

/// Exact NNLS for column `col` of the subproblem by block principal pivoting,
/// warm-started from the partition of x0. Throws IterationLimitError when the
/// exchange cap is hit and RankDeficiencyError from the passive solves.
DenseVector bpp_solve_column(const NnlsSubproblem& sub, Index col, std::span<const double> x0,
                             const BppConfig& cfg = {}, BppStats* stats = nullptr);

/// All columns at once (X0 and the result are k x s). Columns that share a
/// passive set in a sweep share a single Cholesky factorization. Errors are
/// rethrown with the failing column index in the message.
DenseMatrix bpp_solve_matrix(const NnlsSubproblem& sub, const DenseMatrix& x0,
                             const BppConfig& cfg = {}, BppStats* stats = nullptr);

}  // namespace symnmf
