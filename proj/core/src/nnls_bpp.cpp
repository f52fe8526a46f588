#include "symnmf/nnls_bpp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include <Eigen/Cholesky>

#include "symnmf/error.hpp"

namespace symnmf {

namespace {

std::vector<Index> indices_where(const std::vector<char>& flags, bool value) {
  std::vector<Index> out;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (static_cast<bool>(flags[i]) == value) out.push_back(static_cast<Index>(i));
  }
  return out;
}

// A pivot below k * eps of the largest diagonal entry is treated as a breakdown:
// LLT alone accepts round-off sized positive pivots of singular matrices.
Eigen::LLT<DenseMatrix> factor_passive(const NnlsSubproblem& sub, const std::vector<Index>& passive) {
  const DenseMatrix q = sub.gram(passive, passive);
  Eigen::LLT<DenseMatrix> llt(q);
  const double floor = static_cast<double>(passive.size()) * std::numeric_limits<double>::epsilon() *
                       q.diagonal().cwiseAbs().maxCoeff();
  if (llt.info() != Eigen::Success || llt.matrixLLT().diagonal().array().square().minCoeff() <= floor) {
    throw RankDeficiencyError("Cholesky breakdown on a passive set of size " +
                              std::to_string(passive.size()) +
                              ": restricted Gram matrix is not positive definite");
  }
  return llt;
}

// Kim-Park block principal pivoting state for one right-hand side.
class ColumnPivoting {
 public:
  ColumnPivoting(const NnlsSubproblem& sub, Index col, std::span<const double> x0,
                 const BppConfig& cfg)
      : sub_(sub), col_(col), cfg_(cfg), passive_(static_cast<std::size_t>(sub.rank()), 0),
        x_(DenseVector::Zero(sub.rank())) {
    const Index k = sub.rank();
    for (Index i = 0; i < k; ++i) passive_[static_cast<std::size_t>(i)] = x0[static_cast<std::size_t>(i)] > 0.0;
    best_violations_ = k + 1;
    failures_left_ = cfg.max_block_failures;
    cap_ = cfg.max_iterations > 0 ? cfg.max_iterations : static_cast<int>(5 * k);
    rhs_scale_ = sub.cross.col(col).cwiseAbs().maxCoeff();
  }

  [[nodiscard]] bool done() const { return done_; }
  [[nodiscard]] const std::vector<char>& passive_flags() const { return passive_; }
  [[nodiscard]] std::vector<Index> passive() const { return indices_where(passive_, true); }
  [[nodiscard]] const DenseVector& solution() const { return x_; }

  // Installs the passive solution z, evaluates KKT and performs one exchange.
  void advance(const std::vector<Index>& passive, const Eigen::Ref<const DenseVector>& z,
               BppStats& stats) {
    const std::vector<Index> active = indices_where(passive_, false);
    x_.setZero();
    double x_scale = 0.0;
    for (std::size_t p = 0; p < passive.size(); ++p) {
      x_(passive[p]) = z(static_cast<Index>(p));
      x_scale = std::max(x_scale, std::abs(z(static_cast<Index>(p))));
    }
    DenseVector g_active(static_cast<Index>(active.size()));
    if (!active.empty()) {
      g_active = -sub_.cross(active, col_);
      if (!passive.empty()) g_active.noalias() += sub_.gram(active, passive) * z;
    }

    // Round-off sized values are snapped to zero before the sign test.
    const double x_tol = cfg_.tolerance * x_scale;
    const double g_tol = cfg_.tolerance * rhs_scale_;
    for (Index p : passive) {
      if (std::abs(x_(p)) <= x_tol) x_(p) = 0.0;
    }
    std::vector<double> g_act(active.size());
    for (std::size_t a = 0; a < active.size(); ++a) {
      const double g = g_active(static_cast<Index>(a));
      g_act[a] = std::abs(g) <= g_tol ? 0.0 : g;
    }
    std::vector<double> xp(passive.size());
    for (std::size_t p = 0; p < passive.size(); ++p) xp[p] = x_(passive[p]);

    const KktCheck kkt = kkt_satisfied(IndexPartition{active, passive}, xp, g_act, 0.0);
    ++stats.sweeps;
    if (kkt.satisfied) {
      done_ = true;
      return;
    }

    std::vector<Index> violating = kkt.passive_violations;
    violating.insert(violating.end(), kkt.active_violations.begin(), kkt.active_violations.end());
    const auto count = static_cast<Index>(violating.size());

    if (++iterations_ > cap_) {
      throw IterationLimitError("block principal pivoting exceeded " + std::to_string(cap_) +
                                " exchanges");
    }

    if (count < best_violations_) {
      best_violations_ = count;
      failures_left_ = cfg_.max_block_failures;
      exchange_all(violating, stats);
    } else if (failures_left_ > 0) {
      --failures_left_;
      exchange_all(violating, stats);
    } else {
      const Index last = *std::max_element(violating.begin(), violating.end());
      flip(last);
      ++stats.exchanges;
      ++stats.backup_activations;
    }
  }

 private:
  void flip(Index i) {
    auto& f = passive_[static_cast<std::size_t>(i)];
    f = !f;
  }

  void exchange_all(const std::vector<Index>& violating, BppStats& stats) {
    for (Index i : violating) flip(i);
    stats.exchanges += static_cast<std::int64_t>(violating.size());
  }

  const NnlsSubproblem& sub_;
  Index col_;
  BppConfig cfg_;
  std::vector<char> passive_;
  DenseVector x_;
  Index best_violations_ = 0;
  int failures_left_ = 0;
  int iterations_ = 0;
  int cap_ = 0;
  double rhs_scale_ = 0.0;
  bool done_ = false;
};

void check_config(const BppConfig& cfg) {
  if (cfg.max_block_failures < 1) throw InvalidInputError("BppConfig: max_block_failures must be >= 1");
  if (cfg.max_iterations < 0) throw InvalidInputError("BppConfig: max_iterations must be >= 0");
  if (!(cfg.tolerance >= 0.0)) throw InvalidInputError("BppConfig: tolerance must be >= 0");
}

void check_start(const NnlsSubproblem& sub, Index rows, Index cols) {
  if (sub.gram.rows() != sub.gram.cols() || sub.cross.rows() != sub.gram.rows()) {
    throw DimensionError("NNLS subproblem: gram/cross shapes disagree");
  }
  if (rows != sub.rank() || cols != sub.columns()) {
    throw DimensionError("NNLS start iterate is " + std::to_string(rows) + "x" +
                         std::to_string(cols) + ", expected " + std::to_string(sub.rank()) + "x" +
                         std::to_string(sub.columns()));
  }
}

}  // namespace

IndexPartition IndexPartition::from_iterate(std::span<const double> x0) {
  IndexPartition part;
  for (std::size_t i = 0; i < x0.size(); ++i) {
    (x0[i] > 0.0 ? part.passive : part.active).push_back(static_cast<Index>(i));
  }
  return part;
}

IndexPartition IndexPartition::uniform(Index k, bool passive) {
  IndexPartition part;
  auto& target = passive ? part.passive : part.active;
  for (Index i = 0; i < k; ++i) target.push_back(i);
  return part;
}

DenseVector solve_passive(const NnlsSubproblem& sub, Index col, const IndexPartition& part) {
  if (part.passive.empty()) throw InvalidInputError("solve_passive: passive set is empty");
  if (col < 0 || col >= sub.columns()) throw DimensionError("solve_passive: column out of range");
  const auto llt = factor_passive(sub, part.passive);
  return llt.solve(DenseVector(sub.cross(part.passive, col)));
}

KktCheck kkt_satisfied(const IndexPartition& part, std::span<const double> x_passive,
                       std::span<const double> g_active, double tol) {
  if (x_passive.size() != part.passive.size() || g_active.size() != part.active.size()) {
    throw DimensionError("kkt_satisfied: vector sizes do not match the partition");
  }
  KktCheck out;
  for (std::size_t p = 0; p < x_passive.size(); ++p) {
    if (x_passive[p] < -tol) out.passive_violations.push_back(part.passive[p]);
  }
  for (std::size_t a = 0; a < g_active.size(); ++a) {
    if (g_active[a] < -tol) out.active_violations.push_back(part.active[a]);
  }
  out.satisfied = out.passive_violations.empty() && out.active_violations.empty();
  return out;
}

DenseVector bpp_solve_column(const NnlsSubproblem& sub, Index col, std::span<const double> x0,
                             const BppConfig& cfg, BppStats* stats) {
  check_config(cfg);
  check_start(sub, static_cast<Index>(x0.size()), sub.columns());
  if (col < 0 || col >= sub.columns()) throw DimensionError("bpp_solve_column: column out of range");
  if (std::any_of(x0.begin(), x0.end(), [](double v) { return v < 0.0; })) {
    throw InvalidInputError("bpp_solve_column: x0 has negative entries");
  }

  BppStats local;
  ColumnPivoting state(sub, col, x0, cfg);
  while (!state.done()) {
    const std::vector<Index> passive = state.passive();
    if (passive.empty()) {
      state.advance(passive, DenseVector(0), local);
      continue;
    }
    const auto llt = factor_passive(sub, passive);
    ++local.cholesky;
    const DenseVector z = llt.solve(DenseVector(sub.cross(passive, col)));
    state.advance(passive, z, local);
  }
  if (stats) *stats += local;
  return state.solution();
}

DenseMatrix bpp_solve_matrix(const NnlsSubproblem& sub, const DenseMatrix& x0, const BppConfig& cfg,
                             BppStats* stats) {
  check_config(cfg);
  check_start(sub, x0.rows(), x0.cols());
  if ((x0.array() < 0.0).any()) throw InvalidInputError("bpp_solve_matrix: X0 has negative entries");

  const Index k = sub.rank();
  const Index s = sub.columns();
  std::vector<ColumnPivoting> states;
  states.reserve(static_cast<std::size_t>(s));
  for (Index h = 0; h < s; ++h) {
    states.emplace_back(sub, h, std::span<const double>(x0.col(h).data(), static_cast<std::size_t>(k)),
                        cfg);
  }

  BppStats local;
  std::vector<Index> pending(static_cast<std::size_t>(s));
  for (Index h = 0; h < s; ++h) pending[static_cast<std::size_t>(h)] = h;

  while (!pending.empty()) {
    std::map<std::vector<char>, std::vector<Index>> groups;
    for (Index h : pending) groups[states[static_cast<std::size_t>(h)].passive_flags()].push_back(h);

    for (const auto& [flags, members] : groups) {
      const std::vector<Index> passive = indices_where(flags, true);
      DenseMatrix z(static_cast<Index>(passive.size()), static_cast<Index>(members.size()));
      if (!passive.empty()) {
        Eigen::LLT<DenseMatrix> llt;
        try {
          llt = factor_passive(sub, passive);
        } catch (const RankDeficiencyError& e) {
          throw RankDeficiencyError(std::string(e.what()) + " (column " +
                                    std::to_string(members.front()) + ")");
        }
        ++local.cholesky;
        z = llt.solve(DenseMatrix(sub.cross(passive, members)));
      }
      for (std::size_t m = 0; m < members.size(); ++m) {
        const Index h = members[m];
        try {
          states[static_cast<std::size_t>(h)].advance(passive, z.col(static_cast<Index>(m)), local);
        } catch (const IterationLimitError& e) {
          throw IterationLimitError(std::string(e.what()) + " (column " + std::to_string(h) + ")");
        }
      }
    }

    std::erase_if(pending, [&](Index h) { return states[static_cast<std::size_t>(h)].done(); });
  }

  DenseMatrix out(k, s);
  for (Index h = 0; h < s; ++h) out.col(h) = states[static_cast<std::size_t>(h)].solution();
  if (stats) *stats += local;
  return out;
}

}  // namespace symnmf
