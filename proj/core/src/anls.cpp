#include "symnmf/anls.hpp"

#include <cmath>
#include <string>
#include <type_traits>

#include "symnmf/error.hpp"

namespace symnmf {

DenseMatrix inner_solve(const InnerSolver& solver, const NnlsSubproblem& sub, const DenseMatrix& x0,
                        InnerStats& stats) {
  return std::visit(
      [&](const auto& s) -> DenseMatrix {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BppInner>) {
          BppStats bpp;
          DenseMatrix x = bpp_solve_matrix(sub, x0, s.config, &bpp);
          stats.bpp += bpp;
          stats.corrections += bpp.exchanges;
          return x;
        } else {
          GcdResult r = gcd_solve_matrix(sub, x0, s.config);
          stats.corrections += r.corrections;
          stats.capped_columns += static_cast<std::int64_t>(r.capped_columns.size());
          return std::move(r.x);
        }
      },
      solver);
}

AnlsResult anls_nmf(const DenseMatrix& m, Index k, const InnerSolver& solver, const DenseMatrix& w0,
                    const AnlsStop& stop) {
  if (m.size() == 0) throw InvalidInputError("anls_nmf: empty matrix");
  if (!is_nonnegative(m)) throw InvalidInputError("anls_nmf: M has negative entries");
  if (k < 1) throw InvalidInputError("anls_nmf: k must be positive");
  if (w0.rows() != m.rows() || w0.cols() != k) throw DimensionError("anls_nmf: W0 must be m x k");
  if (!is_nonnegative(w0)) throw InvalidInputError("anls_nmf: W0 has negative entries");
  if (stop.max_iterations < 1) throw InvalidInputError("anls_nmf: max_iterations must be >= 1");

  AnlsResult result;
  result.w = w0;
  result.h = DenseMatrix::Zero(m.cols(), k);

  if (m.norm() == 0.0) {
    result.w.setZero();
    result.errors.push_back(0.0);
    result.converged = true;
    return result;
  }

  DenseMatrix ht = result.h.transpose();
  DenseMatrix wt = result.w.transpose();
  for (int nu = 1; nu <= stop.max_iterations; ++nu) {
    try {
      NnlsSubproblem h_sub{gram_matrix(result.w), DenseMatrix(result.w.transpose() * m)};
      ht = inner_solve(solver, h_sub, ht, result.stats);
      result.h = ht.transpose();

      NnlsSubproblem w_sub{gram_matrix(result.h), DenseMatrix((m * result.h).transpose())};
      wt = inner_solve(solver, w_sub, wt, result.stats);
      result.w = wt.transpose();
    } catch (const Error&) {
      rethrow_with_context("outer iteration " + std::to_string(nu));
    }

    DenseMatrix residual = m;
    residual.noalias() -= result.w * result.h.transpose();
    const double e = residual.squaredNorm();
    result.errors.push_back(e);

    if (e == 0.0) {
      result.converged = true;
      break;
    }
    if (result.errors.size() >= 2) {
      const double prev = result.errors[result.errors.size() - 2];
      if (std::abs(e - prev) <= stop.rel_tol * prev) {
        result.converged = true;
        break;
      }
    }
  }
  return result;
}

}  // namespace symnmf
