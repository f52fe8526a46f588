#include "symnmf/nnls_gcd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "symnmf/error.hpp"

namespace symnmf {

namespace {

// mu at or below this fraction of max_{h,i} cross_ih^2 / q_ii is round-off.
constexpr double kNegligibleDecrease = 1e-20;

inline void coordinate_move(double g, double q, double x, double& step, double& decrease) {
  const double ratio = g / q;
  step = ratio <= x ? -ratio : -x;
  decrease = -g * step - 0.5 * q * step * step;
}

// Fills `decrease` for every coordinate and returns the argmax (smallest index on ties).
inline Index scan(const double* x, const double* g, const double* diag, double* decrease, Index k) {
  for (Index i = 0; i < k; ++i) {
    const double ratio = g[i] / diag[i];
    const double step = ratio <= x[i] ? -ratio : -x[i];
    decrease[i] = -g[i] * step - 0.5 * diag[i] * step * step;
  }
  Index best = 0;
  for (Index i = 1; i < k; ++i) {
    if (decrease[i] > decrease[best]) best = i;
  }
  return best;
}

DenseVector checked_diagonal(const DenseMatrix& gram) {
  DenseVector diag = gram.diagonal();
  for (Index i = 0; i < diag.size(); ++i) {
    if (!(diag(i) > 0.0)) {
      throw RankDeficiencyError("greedy coordinate descent: q_" + std::to_string(i) + std::to_string(i) +
                                " = " + std::to_string(diag(i)) + " is not positive");
    }
  }
  return diag;
}

void check_shapes(const NnlsSubproblem& sub, const DenseMatrix& x0) {
  if (sub.gram.rows() != sub.gram.cols() || sub.cross.rows() != sub.gram.rows()) {
    throw DimensionError("NNLS subproblem: gram/cross shapes disagree");
  }
  if (x0.rows() != sub.rank() || x0.cols() != sub.columns()) {
    throw DimensionError("greedy coordinate descent: X0 has the wrong shape");
  }
  if ((x0.array() < 0.0).any()) throw InvalidInputError("greedy coordinate descent: X0 has negative entries");
}

double decrease_scale(const NnlsSubproblem& sub, const DenseVector& diag) {
  double scale = 0.0;
  for (Index h = 0; h < sub.columns(); ++h) {
    for (Index i = 0; i < sub.rank(); ++i) {
      const double c = sub.cross(i, h);
      scale = std::max(scale, c * c / diag(i));
    }
  }
  return scale;
}

double mu_from_gradient(const DenseMatrix& x, const DenseMatrix& g, const DenseVector& diag) {
  double mu = 0.0;
  for (Index h = 0; h < x.cols(); ++h) {
    for (Index i = 0; i < x.rows(); ++i) {
      double step = 0.0, decrease = 0.0;
      coordinate_move(g(i, h), diag(i), x(i, h), step, decrease);
      mu = std::max(mu, decrease);
    }
  }
  return mu;
}

}  // namespace

GcdColumnState make_gcd_state(const NnlsSubproblem& sub, Index col, std::span<const double> x0) {
  if (static_cast<Index>(x0.size()) != sub.rank()) throw DimensionError("make_gcd_state: x0 has the wrong size");
  if (col < 0 || col >= sub.columns()) throw DimensionError("make_gcd_state: column out of range");
  GcdColumnState state;
  state.x = Eigen::Map<const DenseVector>(x0.data(), sub.rank());
  if ((state.x.array() < 0.0).any()) throw InvalidInputError("make_gcd_state: x0 has negative entries");
  state.g = sub.gram * state.x - sub.cross.col(col);
  return state;
}

CoordinateCorrection best_correction(const GcdColumnState& state, const DenseMatrix& gram) {
  const DenseVector diag = checked_diagonal(gram);
  const Index k = diag.size();
  if (state.x.size() != k || state.g.size() != k) throw DimensionError("best_correction: state size mismatch");
  DenseVector decrease(k);
  CoordinateCorrection best;
  best.index = scan(state.x.data(), state.g.data(), diag.data(), decrease.data(), k);
  coordinate_move(state.g(best.index), diag(best.index), state.x(best.index), best.step, best.decrease);
  return best;
}

void apply_correction(GcdColumnState& state, const DenseMatrix& gram, const CoordinateCorrection& c) {
  const Index i = c.index;
  if (c.step == -state.x(i)) {
    state.x(i) = 0.0;
  } else {
    state.x(i) += c.step;
  }
  state.g.noalias() += c.step * gram.col(i);
  ++state.corrections;
}

double compute_mu(const NnlsSubproblem& sub, const DenseMatrix& x0) {
  check_shapes(sub, x0);
  const DenseVector diag = checked_diagonal(sub.gram);
  DenseMatrix g = sub.gram * x0 - sub.cross;
  return mu_from_gradient(x0, g, diag);
}

GcdResult gcd_solve_matrix(const NnlsSubproblem& sub, const DenseMatrix& x0, const GcdConfig& cfg,
                           const GcdObserver& observer) {
  if (!(cfg.eta > 0.0)) throw InvalidInputError("GcdConfig: eta must be positive");
  if (cfg.max_corrections_per_column < 0) throw InvalidInputError("GcdConfig: negative correction cap");
  check_shapes(sub, x0);

  const Index k = sub.rank();
  const Index s = sub.columns();
  const DenseVector diag = checked_diagonal(sub.gram);
  const std::int64_t cap =
      cfg.max_corrections_per_column > 0 ? cfg.max_corrections_per_column : 100 * static_cast<std::int64_t>(k);

  GcdResult result;
  result.x = x0;
  DenseMatrix g = sub.gram * x0;
  g -= sub.cross;

  result.mu = mu_from_gradient(result.x, g, diag);
  if (result.mu <= kNegligibleDecrease * decrease_scale(sub, diag)) return result;
  const double threshold = cfg.eta * result.mu;

  const double* q = sub.gram.data();
  std::vector<double> decrease(static_cast<std::size_t>(k));
  for (Index h = 0; h < s; ++h) {
    double* x = result.x.col(h).data();
    double* grad = g.col(h).data();
    std::int64_t done = 0;
    for (;;) {
      const Index i = scan(x, grad, diag.data(), decrease.data(), k);
      const double best = decrease[static_cast<std::size_t>(i)];
      if (best < threshold || best <= 0.0) break;
      if (done == cap) {
        result.capped_columns.push_back(h);
        break;
      }
      const double ratio = grad[i] / diag(i);
      double step;
      if (ratio <= x[i]) {
        step = -ratio;
        x[i] += step;
      } else {
        step = -x[i];
        x[i] = 0.0;
      }
      const double* qi = q + i * k;
      for (Index t = 0; t < k; ++t) grad[t] += step * qi[t];
      ++done;
      if (observer) {
        observer(h, CoordinateCorrection{i, step, best},
                 std::span<const double>(x, static_cast<std::size_t>(k)),
                 std::span<const double>(grad, static_cast<std::size_t>(k)));
      }
    }
    result.corrections += done;
  }
  return result;
}

}  // namespace symnmf
