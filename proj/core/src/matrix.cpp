#include "symnmf/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Core>

#include "symnmf/error.hpp"

namespace symnmf {

namespace {

void require_nonempty(const DenseMatrix& m, const char* what) {
  if (m.size() == 0) {
    throw InvalidInputError(std::string(what) + ": empty matrix");
  }
}

std::string shape(const DenseMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

double frobenius_norm(const DenseMatrix& m) {
  require_nonempty(m, "frobenius_norm");
  return m.norm();
}

double max_entry(const DenseMatrix& m) {
  require_nonempty(m, "max_entry");
  return m.maxCoeff();
}

bool is_nonnegative(const DenseMatrix& m) { return (m.array() >= 0.0).all(); }

bool is_symmetric(const DenseMatrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  return (m - m.transpose()).norm() <= rel_tol * m.norm();
}

DenseMatrix gram_matrix(const DenseMatrix& c) {
  const Index k = c.cols();
  DenseMatrix q = DenseMatrix::Zero(k, k);
  q.selfadjointView<Eigen::Lower>().rankUpdate(c.transpose());
  q.triangularView<Eigen::StrictlyUpper>() = q.transpose();
  return q;
}

NnlsSubproblem build_subproblem(const DenseMatrix& c, const DenseMatrix& b) {
  if (c.rows() != b.rows()) {
    throw DimensionError("build_subproblem: C is " + shape(c) + " but B is " + shape(b));
  }
  require_nonempty(c, "build_subproblem");
  NnlsSubproblem sub;
  sub.gram = gram_matrix(c);
  sub.cross.noalias() = c.transpose() * b;
  return sub;
}

double relative_nonsym_error(const DenseMatrix& a, const DenseMatrix& w, const DenseMatrix& h) {
  if (a.rows() != w.rows() || a.cols() != h.rows() || w.cols() != h.cols()) {
    throw DimensionError("relative error: A is " + shape(a) + ", W is " + shape(w) + ", H is " +
                         shape(h));
  }
  const double norm_a = frobenius_norm(a);
  if (norm_a == 0.0) throw InvalidInputError("relative error: ||A||_F = 0");
  DenseMatrix residual = a;
  residual.noalias() -= w * h.transpose();
  return residual.norm() / norm_a;
}

double relative_sym_error(const DenseMatrix& a, const DenseMatrix& w) {
  return relative_nonsym_error(a, w, w);
}

double degree_of_symmetry(const DenseMatrix& w, const DenseMatrix& h) {
  if (w.rows() != h.rows() || w.cols() != h.cols()) {
    throw DimensionError("degree_of_symmetry: W is " + shape(w) + " but H is " + shape(h));
  }
  const double nw = w.norm();
  const double nh = h.norm();
  if (nw == 0.0 && nh == 0.0) return 0.0;
  const double denom = std::min(nw, nh);
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return (w - h).norm() / denom;
}

}  // namespace symnmf
