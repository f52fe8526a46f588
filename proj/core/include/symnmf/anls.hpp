#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "symnmf/matrix.hpp"
#include "symnmf/nnls_bpp.hpp"
#include "symnmf/nnls_gcd.hpp"

namespace symnmf {

/// Exact inner solves by block principal pivoting.
struct BppInner {
  BppConfig config;
};

/// Inexact inner solves by greedy coordinate descent.
struct GcdInner {
  GcdConfig config;
};

using InnerSolver = std::variant<BppInner, GcdInner>;

/// Accumulated inner work. `corrections` counts GCD coordinate corrections or
/// BPP index exchanges, whichever solver ran.
struct InnerStats {
  std::int64_t corrections = 0;
  std::int64_t capped_columns = 0;
  BppStats bpp;

  InnerStats& operator+=(const InnerStats& o) {
    corrections += o.corrections;
    capped_columns += o.capped_columns;
    bpp += o.bpp;
    return *this;
  }
};

/// Solves min_{X >= 0} for the subproblem starting from X0 (k x s) with the
/// chosen method and adds the work done to `stats`.
DenseMatrix inner_solve(const InnerSolver& solver, const NnlsSubproblem& sub, const DenseMatrix& x0,
                        InnerStats& stats);

struct AnlsStop {
  /// Stop once |e(nu) - e(nu-1)| <= rel_tol * e(nu-1).
  double rel_tol = 1e-6;
  int max_iterations = 200;
};

struct AnlsResult {
  DenseMatrix w;  ///< m x k
  DenseMatrix h;  ///< n x k
  /// e(nu) = ||M - W(nu) H(nu)^T||_F^2 for nu = 1, 2, ...
  std::vector<double> errors;
  bool converged = false;
  InnerStats stats;
};

/// Alternating nonnegative least squares for M ~ W H^T: each outer step
/// solves for H with W fixed, then for W with H fixed (on M^T). H starts at
/// zero. Inner failures are rethrown with the outer iteration number.
AnlsResult anls_nmf(const DenseMatrix& m, Index k, const InnerSolver& solver, const DenseMatrix& w0,
                    const AnlsStop& stop = {});

}  // namespace symnmf
