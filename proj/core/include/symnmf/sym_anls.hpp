#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <variant>
#include <vector>

#include "symnmf/anls.hpp"
#include "symnmf/matrix.hpp"

namespace symnmf {

/// Penalty parameter and progress metrics of one outer iteration.
struct PenaltyState {
  double beta = 1.0;   ///< multiplier, alpha = beta * max(A)
  double alpha = 0.0;  ///< weight of ||W - H||_F^2
  double eps_S = 0.0;  ///< ||A - W W^T|| / ||A||
  double eps_N = 0.0;  ///< ||A - W H^T|| / ||A||
  double delta = 0.0;  ///< ||W - H|| / min(||W||, ||H||)
  double rho = 0.0;    ///< eps_S / eps_N

  bool operator==(const PenaltyState&) const = default;
};

/// Adaptive beta update driven by rho and delta.
struct AdaUpdate {};

/// beta <- zeta * beta.
struct GeometricUpdate {
  double zeta = 1.01;
};

using BetaUpdate = std::variant<AdaUpdate, GeometricUpdate>;

struct SymConfig {
  Index k = 1;
  double tau1 = 1e-3;  ///< relative stall tolerance on eps_S
  double tau2 = 0.1;   ///< symmetry tolerance on delta
  int nu_max = 500;
  InnerSolver inner = GcdInner{};
  BetaUpdate update = AdaUpdate{};
  std::uint64_t seed = 0;  ///< seeds W0
};

struct IterationTrace {
  int nu = 0;
  PenaltyState penalty;           ///< beta/alpha used in this iteration, metrics after it
  std::int64_t corrections = 0;   ///< inner corrections (GCD) or exchanges (BPP), both half-steps
  double elapsed_s = 0.0;         ///< seconds since the run started

  bool operator==(const IterationTrace&) const = default;
};

enum class SymStatus { Converged, IterationCap };

struct SymResult {
  DenseMatrix w;
  DenseMatrix h;
  std::vector<IterationTrace> trace;
  SymStatus status = SymStatus::IterationCap;
  double eps_S0 = 0.0;  ///< eps_S of the starting W, used by the first stall test
  InnerStats stats;
};

/// Adaptive update, first matching branch:
///   rho<1, beta>8, (delta<0.01 or rho<0.8)  -> beta/8
///   rho<1, beta>4, (delta<0.1  or rho<0.9)  -> beta/4
///   rho<1, beta>2                           -> beta/2
///   otherwise                               -> beta * min(8, rho^2)
double ada_update(double beta, double rho, double delta);

double geometric_update(double beta, double zeta);

/// Dispatches to ada_update or geometric_update.
double update_beta(const BetaUpdate& update, const PenaltyState& state);

/// Implicit Gram form of the stacked problem with C = [F; sqrt(alpha) I] and
/// B = [A; sqrt(alpha) F^T]: gram = F^T F + alpha I, cross = F^T A + alpha F^T.
NnlsSubproblem penalized_subproblem(const DenseMatrix& a, const DenseMatrix& f, double alpha);

/// 1/2 (||A - W H^T||_F^2 + alpha ||W - H||_F^2).
double penalized_objective(const DenseMatrix& a, const DenseMatrix& w, const DenseMatrix& h, double alpha);

struct InitialFactors {
  DenseMatrix w;  ///< R sqrt(||A||_F) / ||R||_F, R uniform [0,1)
  DenseMatrix h;  ///< zero
};

InitialFactors initial_factors(const DenseMatrix& a, Index k, std::uint64_t seed);

/// |eps_S - eps_S_prev| <= tau1 * eps_S and delta <= tau2.
bool stop_rule(double eps_S_prev, double eps_S, double delta, double tau1, double tau2);

struct OuterStep {
  DenseMatrix w;
  DenseMatrix h;
  InnerStats stats;
};

/// One outer iteration at fixed alpha: H from the first penalized subproblem
/// warm-started at H, then W from the second warm-started at W.
OuterStep penalized_step(const DenseMatrix& a, const DenseMatrix& w, const DenseMatrix& h, double alpha,
                         const InnerSolver& inner);

/// Throws InvalidInputError unless A is square, symmetric, nonnegative and nonzero.
void validate_symmetric_input(const DenseMatrix& a);

/// Penalized alternating solver for min_{W>=0} ||A - W W^T||_F with
/// W0/H0 from initial_factors(a, cfg.k, cfg.seed).
SymResult sym_anls(const DenseMatrix& a, const SymConfig& cfg);

/// Same with explicit starting factors.
SymResult sym_anls(const DenseMatrix& a, const SymConfig& cfg, const DenseMatrix& w0, const DenseMatrix& h0);

inline constexpr std::string_view kTraceCsvHeader = "nu,beta,alpha,eps_S,eps_N,delta,rho,corrections,elapsed_s";

/// One header line then one row per iteration, values with 17 significant digits.
void write_trace_csv(std::ostream& out, const std::vector<IterationTrace>& trace);

}  // namespace symnmf
