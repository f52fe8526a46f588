#pragma once

#include <Eigen/Core>

namespace symnmf {

/// Column-major dense matrix of doubles. Carries A, M, W, H, V, C and B.
using DenseMatrix = Eigen::MatrixXd;
using DenseVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Implicit data of the NNLS problem min_{X>=0} 1/2 ||B - C X^T||_F^2.
///
/// Only the Gram matrix Q = C^T C (k x k) and the cross product P = C^T B
/// (k x s) are kept; solvers never touch C or B. Column h of `cross` is the
/// right-hand side of the h-th column problem.
struct NnlsSubproblem {
  DenseMatrix gram;
  DenseMatrix cross;

  [[nodiscard]] Index rank() const { return gram.rows(); }
  [[nodiscard]] Index columns() const { return cross.cols(); }
};

/// sqrt(sum m_ij^2). Throws InvalidInputError on an empty matrix.
double frobenius_norm(const DenseMatrix& m);

/// Largest entry of a nonempty matrix.
double max_entry(const DenseMatrix& m);

/// True when every entry is >= 0.
bool is_nonnegative(const DenseMatrix& m);

/// ||M - M^T||_F <= rel_tol * ||M||_F for a square matrix.
bool is_symmetric(const DenseMatrix& m, double rel_tol = 1e-10);

/// C^T C via a symmetric rank-k update (both triangles filled).
DenseMatrix gram_matrix(const DenseMatrix& c);

/// Gram and cross products of C and B. Row counts must agree.
NnlsSubproblem build_subproblem(const DenseMatrix& c, const DenseMatrix& b);

/// ||A - W H^T||_F / ||A||_F.
double relative_nonsym_error(const DenseMatrix& a, const DenseMatrix& w, const DenseMatrix& h);

/// ||A - W W^T||_F / ||A||_F. Same code path as relative_nonsym_error(a, w, w).
double relative_sym_error(const DenseMatrix& a, const DenseMatrix& w);

/// ||W - H||_F / min(||W||_F, ||H||_F).
///
/// Both factors zero gives 0. Exactly one zero factor gives +infinity so that
/// a symmetry test against it can never pass.
double degree_of_symmetry(const DenseMatrix& w, const DenseMatrix& h);

}  // namespace symnmf
