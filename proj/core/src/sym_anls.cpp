#include "symnmf/sym_anls.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

#include "symnmf/error.hpp"
#include "symnmf/rng.hpp"

namespace symnmf {

double ada_update(double beta, double rho, double delta) {
  if (rho < 1.0 && beta > 8.0 && (delta < 0.01 || rho < 0.8)) return beta / 8.0;
  if (rho < 1.0 && beta > 4.0 && (delta < 0.1 || rho < 0.9)) return beta / 4.0;
  if (rho < 1.0 && beta > 2.0) return beta / 2.0;
  return beta * std::min(8.0, rho * rho);
}

double geometric_update(double beta, double zeta) { return beta * zeta; }

double update_beta(const BetaUpdate& update, const PenaltyState& state) {
  if (const auto* g = std::get_if<GeometricUpdate>(&update)) return geometric_update(state.beta, g->zeta);
  return ada_update(state.beta, state.rho, state.delta);
}

NnlsSubproblem penalized_subproblem(const DenseMatrix& a, const DenseMatrix& f, double alpha) {
  if (a.rows() != a.cols() || f.rows() != a.rows()) {
    throw DimensionError("penalized_subproblem: A is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", F has " + std::to_string(f.rows()) + " rows");
  }
  if (!(alpha >= 0.0)) throw InvalidInputError("penalized_subproblem: alpha must be >= 0");
  NnlsSubproblem sub;
  sub.gram = gram_matrix(f);
  sub.gram.diagonal().array() += alpha;
  sub.cross.noalias() = f.transpose() * a;
  sub.cross += alpha * f.transpose();
  return sub;
}

double penalized_objective(const DenseMatrix& a, const DenseMatrix& w, const DenseMatrix& h, double alpha) {
  DenseMatrix residual = a;
  residual.noalias() -= w * h.transpose();
  return 0.5 * (residual.squaredNorm() + alpha * (w - h).squaredNorm());
}

InitialFactors initial_factors(const DenseMatrix& a, Index k, std::uint64_t seed) {
  if (k < 1 || k >= a.rows()) throw InvalidInputError("initial_factors: need 0 < k < n");
  Rng rng(seed);
  DenseMatrix r = random_uniform(a.rows(), k, rng);
  const double norm_r = r.norm();
  if (norm_r == 0.0) throw InvalidInputError("initial_factors: degenerate random draw");
  InitialFactors out;
  out.w = r * (std::sqrt(frobenius_norm(a)) / norm_r);
  out.h = DenseMatrix::Zero(a.rows(), k);
  return out;
}

bool stop_rule(double eps_S_prev, double eps_S, double delta, double tau1, double tau2) {
  return std::abs(eps_S - eps_S_prev) <= tau1 * eps_S && delta <= tau2;
}

OuterStep penalized_step(const DenseMatrix& a, const DenseMatrix& w, const DenseMatrix& h, double alpha,
                         const InnerSolver& inner) {
  OuterStep step;
  const NnlsSubproblem h_sub = penalized_subproblem(a, w, alpha);
  step.h = inner_solve(inner, h_sub, h.transpose(), step.stats).transpose();
  const NnlsSubproblem w_sub = penalized_subproblem(a, step.h, alpha);
  step.w = inner_solve(inner, w_sub, w.transpose(), step.stats).transpose();
  return step;
}

void validate_symmetric_input(const DenseMatrix& a) {
  if (a.size() == 0 || a.rows() != a.cols()) throw InvalidInputError("SymNMF input must be a nonempty square matrix");
  if (!is_nonnegative(a)) throw InvalidInputError("SymNMF input has negative entries");
  if (a.norm() == 0.0) throw InvalidInputError("SymNMF input is the zero matrix");
  if (!is_symmetric(a, 1e-10)) throw InvalidInputError("SymNMF input is not symmetric");
}

namespace {

void validate_config(const SymConfig& cfg, Index n) {
  if (cfg.k < 1 || cfg.k >= n) throw InvalidInputError("SymConfig: need 0 < k < n");
  if (!(cfg.tau1 > 0.0) || !(cfg.tau2 > 0.0)) throw InvalidInputError("SymConfig: tau1 and tau2 must be positive");
  if (cfg.nu_max < 1) throw InvalidInputError("SymConfig: nu_max must be >= 1");
  if (const auto* g = std::get_if<GeometricUpdate>(&cfg.update); g && !(g->zeta > 1.0)) {
    throw InvalidInputError("SymConfig: geometric ratio must exceed 1");
  }
}

double ratio(double eps_S, double eps_N) {
  if (eps_N > 0.0) return eps_S / eps_N;
  return eps_S == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

SymResult sym_anls(const DenseMatrix& a, const SymConfig& cfg) {
  validate_symmetric_input(a);
  validate_config(cfg, a.rows());
  const InitialFactors start = initial_factors(a, cfg.k, cfg.seed);
  return sym_anls(a, cfg, start.w, start.h);
}

SymResult sym_anls(const DenseMatrix& a, const SymConfig& cfg, const DenseMatrix& w0, const DenseMatrix& h0) {
  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();

  validate_symmetric_input(a);
  validate_config(cfg, a.rows());
  if (w0.rows() != a.rows() || w0.cols() != cfg.k || h0.rows() != a.rows() || h0.cols() != cfg.k) {
    throw DimensionError("sym_anls: starting factors must be n x k");
  }
  if (!is_nonnegative(w0) || !is_nonnegative(h0)) throw InvalidInputError("sym_anls: negative starting factor");

  const double max_a = max_entry(a);
  SymResult result;
  result.w = w0;
  result.h = h0;
  result.eps_S0 = relative_sym_error(a, w0);

  double beta = 1.0;
  double eps_prev = result.eps_S0;
  for (int nu = 1;; ++nu) {
    PenaltyState state;
    state.beta = beta;
    state.alpha = beta * max_a;

    OuterStep step;
    try {
      step = penalized_step(a, result.w, result.h, state.alpha, cfg.inner);
    } catch (const Error&) {
      rethrow_with_context("outer iteration " + std::to_string(nu));
    }
    result.w = std::move(step.w);
    result.h = std::move(step.h);
    result.stats += step.stats;

    state.eps_S = relative_sym_error(a, result.w);
    state.eps_N = relative_nonsym_error(a, result.w, result.h);
    state.delta = degree_of_symmetry(result.w, result.h);
    state.rho = ratio(state.eps_S, state.eps_N);

    const bool stop = stop_rule(eps_prev, state.eps_S, state.delta, cfg.tau1, cfg.tau2);
    result.trace.push_back(IterationTrace{
        nu, state, step.stats.corrections, std::chrono::duration<double>(Clock::now() - started).count()});

    if (stop) {
      result.status = SymStatus::Converged;
      break;
    }
    if (nu >= cfg.nu_max) {
      result.status = SymStatus::IterationCap;
      break;
    }
    beta = update_beta(cfg.update, state);
    eps_prev = state.eps_S;
  }
  return result;
}

void write_trace_csv(std::ostream& out, const std::vector<IterationTrace>& trace) {
  out << kTraceCsvHeader << '\n' << std::setprecision(17);
  for (const auto& row : trace) {
    const auto& p = row.penalty;
    out << row.nu << ',' << p.beta << ',' << p.alpha << ',' << p.eps_S << ',' << p.eps_N << ',' << p.delta
        << ',' << p.rho << ',' << row.corrections << ',' << row.elapsed_s << '\n';
  }
}

}  // namespace symnmf
