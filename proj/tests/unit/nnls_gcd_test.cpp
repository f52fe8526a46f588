#include <gtest/gtest.h>

#include <span>

#include "oracles.hpp"
#include "symnmf/error.hpp"
#include "symnmf/nnls_bpp.hpp"
#include "symnmf/nnls_gcd.hpp"

using namespace symnmf;

namespace {

std::span<const double> as_span(const DenseVector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

DenseVector vec(std::initializer_list<double> v) {
  DenseVector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

GcdColumnState state_of(DenseVector x, DenseVector g) { return GcdColumnState{std::move(x), std::move(g), 0}; }

struct Problem {
  DenseMatrix c;
  DenseMatrix b;
  NnlsSubproblem sub;
};

Problem random_problem(Index rows, Index k, Index s, std::uint64_t seed) {
  Problem p;
  p.c = oracle::random_matrix(rows, k, seed, 0.0, 1.0);
  p.b = oracle::random_matrix(rows, s, seed + 500, -0.3, 1.0);
  p.sub = build_subproblem(p.c, p.b);
  return p;
}

}  // namespace

TEST(BestCorrection, UnconstrainedStep) {
  const auto c = best_correction(state_of(vec({0, 0}), vec({-3, -1})), DenseMatrix::Identity(2, 2));
  EXPECT_EQ(c.index, 0);
  EXPECT_EQ(c.step, 3.0);
  EXPECT_EQ(c.decrease, 4.5);
}

TEST(BestCorrection, ClampStep) {
  const auto c = best_correction(state_of(vec({1, 0}), vec({2, 0})), DenseMatrix::Identity(2, 2));
  EXPECT_EQ(c.index, 0);
  EXPECT_EQ(c.step, -1.0);
  EXPECT_EQ(c.decrease, 1.5);
}

TEST(BestCorrection, TiesGoToSmallestIndex) {
  const auto c = best_correction(state_of(vec({0, 0, 0}), vec({-1, -2, -2})), DenseMatrix::Identity(3, 3));
  EXPECT_EQ(c.index, 1);
  const auto none = best_correction(state_of(vec({0, 0}), vec({0, 0})), DenseMatrix::Identity(2, 2));
  EXPECT_EQ(none.index, 0);
  EXPECT_EQ(none.decrease, 0.0);
}

TEST(BestCorrection, ArgmaxOfDirectObjectiveDifferences) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Problem p = random_problem(6, 4, 1, seed);
    const DenseVector x0 = oracle::random_matrix(4, 1, seed + 3).col(0);
    const auto state = make_gcd_state(p.sub, 0, as_span(x0));
    const auto best = best_correction(state, p.sub.gram);

    const double base = oracle::nnls_objective(p.c, p.b.col(0), x0);
    Index argmax = 0;
    double best_drop = -1.0;
    for (Index i = 0; i < 4; ++i) {
      // Exact one-dimensional minimizer over x_i >= 0, found from C and b.
      const double ci_b = p.c.col(i).dot(p.b.col(0) - p.c * x0 + p.c.col(i) * x0(i));
      DenseVector trial = x0;
      trial(i) = std::max(0.0, ci_b / p.c.col(i).squaredNorm());
      const double drop = base - oracle::nnls_objective(p.c, p.b.col(0), trial);
      if (drop > best_drop + 1e-12) {
        best_drop = drop;
        argmax = i;
      }
    }
    EXPECT_EQ(best.index, argmax) << "seed " << seed;
    EXPECT_NEAR(best.decrease, best_drop, 1e-10);
  }
}

TEST(BestCorrection, RejectsNonPositiveDiagonal) {
  DenseMatrix q = DenseMatrix::Identity(2, 2);
  q(1, 1) = 0.0;
  EXPECT_THROW(best_correction(state_of(vec({0, 0}), vec({-1, -1})), q), RankDeficiencyError);
}

TEST(ApplyCorrection, ClampLandsOnZero) {
  DenseMatrix q(2, 2);
  q << 3, 1, 1, 2;
  auto s = state_of(vec({0.1, 0.0}), vec({5.0, 0.0}));
  const auto c = best_correction(s, q);
  ASSERT_EQ(c.step, -0.1);
  apply_correction(s, q, c);
  EXPECT_EQ(s.x(0), 0.0);
  EXPECT_EQ(s.corrections, 1);
  EXPECT_NEAR(s.g(0), 5.0 - 0.3, 1e-15);
  EXPECT_NEAR(s.g(1), -0.1, 1e-15);
}

TEST(ComputeMu, Examples) {
  NnlsSubproblem one{DenseMatrix::Identity(1, 1), DenseMatrix::Constant(1, 1, 3.0)};
  EXPECT_EQ(compute_mu(one, DenseMatrix::Zero(1, 1)), 4.5);

  const Problem p = random_problem(8, 4, 5, 7);
  const DenseMatrix exact = bpp_solve_matrix(p.sub, DenseMatrix::Zero(4, 5));
  EXPECT_LE(compute_mu(p.sub, exact), 1e-12);
}

TEST(ComputeMu, MatchesExhaustiveScan) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Problem p = random_problem(7, 4, 6, seed);
    const DenseMatrix x0 = oracle::random_matrix(4, 6, seed + 9);
    double expected = 0.0;
    for (Index h = 0; h < 6; ++h) {
      const DenseVector start = x0.col(h);
      auto state = make_gcd_state(p.sub, h, as_span(start));
      for (Index i = 0; i < 4; ++i) {
        const double q = p.sub.gram(i, i), g = state.g(i), x = start(i);
        const double step = g / q <= x ? -g / q : -x;
        expected = std::max(expected, -g * step - 0.5 * q * step * step);
      }
    }
    EXPECT_DOUBLE_EQ(compute_mu(p.sub, x0), expected);
  }
}

TEST(GcdSolveMatrix, IdentityReachesMinimumInOneCorrectionPerColumn) {
  const auto sub = build_subproblem(DenseMatrix::Identity(2, 2), DenseMatrix::Identity(2, 2));
  const GcdResult r = gcd_solve_matrix(sub, DenseMatrix::Zero(2, 2));
  EXPECT_EQ(r.x, DenseMatrix::Identity(2, 2));
  EXPECT_EQ(r.corrections, 2);
  EXPECT_TRUE(r.capped_columns.empty());
}

TEST(GcdSolveMatrix, ExactStartDoesNothing) {
  const Problem p = random_problem(9, 4, 5, 3);
  const DenseMatrix exact = bpp_solve_matrix(p.sub, DenseMatrix::Zero(4, 5));
  const GcdResult r = gcd_solve_matrix(p.sub, exact);
  EXPECT_EQ(r.corrections, 0);
  EXPECT_EQ(r.x, exact);
}

TEST(GcdSolveMatrix, TinyEtaMatchesBpp) {
  GcdConfig cfg;
  cfg.eta = 1e-12;
  cfg.max_corrections_per_column = 1000000;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Problem p = random_problem(6, 4, 5, seed);
    const DenseMatrix exact = bpp_solve_matrix(p.sub, DenseMatrix::Zero(4, 5));
    const GcdResult r = gcd_solve_matrix(p.sub, DenseMatrix::Zero(4, 5), cfg);
    for (Index h = 0; h < 5; ++h) {
      const double f_bpp = oracle::nnls_objective(p.c, p.b.col(h), exact.col(h));
      const double f_gcd = oracle::nnls_objective(p.c, p.b.col(h), r.x.col(h));
      EXPECT_LE(std::abs(f_gcd - f_bpp), 1e-6 * std::max(1.0, std::abs(f_bpp))) << "seed " << seed;
    }
  }
}

TEST(GcdSolveMatrix, EveryCorrectionIsExactAndFeasible) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Problem p = random_problem(12, 6, 8, seed);
    const DenseMatrix x0 = oracle::random_matrix(6, 8, seed + 1);
    DenseMatrix previous = x0;
    int checked = 0;
    GcdConfig cfg;
    cfg.eta = 1e-6;
    gcd_solve_matrix(p.sub, x0, cfg,
                     [&](Index h, const CoordinateCorrection& c, std::span<const double> x, std::span<const double> g) {
                       const DenseVector now = Eigen::Map<const DenseVector>(x.data(), 6);
                       const DenseVector before = previous.col(h);
                       const double f0 = oracle::nnls_objective(p.c, p.b.col(h), before);
                       const double f1 = oracle::nnls_objective(p.c, p.b.col(h), now);
                       EXPECT_GE(c.decrease, 0.0);
                       EXPECT_NEAR(f0 - f1, c.decrease, 1e-10);
                       EXPECT_GE(now.minCoeff(), 0.0);
                       if (c.step == -before(c.index)) {
                         EXPECT_EQ(now(c.index), 0.0);
                       }
                       const DenseVector grad = p.c.transpose() * (p.c * now - p.b.col(h));
                       EXPECT_LE((grad - Eigen::Map<const DenseVector>(g.data(), 6)).cwiseAbs().maxCoeff(), 1e-8);
                       previous.col(h) = now;
                       ++checked;
                     });
    EXPECT_GT(checked, 0);
  }
}

TEST(GcdSolveMatrix, SmallerEtaNeverHurts) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Problem p = random_problem(15, 6, 6, seed);
    std::vector<double> previous(6, std::numeric_limits<double>::infinity());
    std::int64_t previous_cor = -1;
    for (double eta : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
      GcdConfig cfg;
      cfg.eta = eta;
      const GcdResult r = gcd_solve_matrix(p.sub, DenseMatrix::Zero(6, 6), cfg);
      EXPECT_GE(r.corrections, previous_cor);
      previous_cor = r.corrections;
      for (Index h = 0; h < 6; ++h) {
        const double f = oracle::nnls_objective(p.c, p.b.col(h), r.x.col(h));
        EXPECT_LE(f, previous[static_cast<std::size_t>(h)] + 1e-12);
        previous[static_cast<std::size_t>(h)] = f;
      }
    }
  }
}

TEST(GcdSolveMatrix, CapIsFlaggedNotFatal) {
  const Problem p = random_problem(20, 8, 3, 5);
  GcdConfig cfg;
  cfg.eta = 1e-12;
  cfg.max_corrections_per_column = 2;
  const GcdResult r = gcd_solve_matrix(p.sub, DenseMatrix::Zero(8, 3), cfg);
  EXPECT_EQ(r.capped_columns, (std::vector<Index>{0, 1, 2}));
  EXPECT_EQ(r.corrections, 6);
}

TEST(GcdSolveMatrix, Errors) {
  const Problem p = random_problem(5, 3, 2, 1);
  GcdConfig bad;
  bad.eta = 0.0;
  EXPECT_THROW(gcd_solve_matrix(p.sub, DenseMatrix::Zero(3, 2), bad), InvalidInputError);
  EXPECT_THROW(gcd_solve_matrix(p.sub, -DenseMatrix::Ones(3, 2)), InvalidInputError);
  EXPECT_THROW(gcd_solve_matrix(p.sub, DenseMatrix::Zero(2, 2)), DimensionError);
  NnlsSubproblem singular{DenseMatrix::Zero(2, 2), DenseMatrix::Ones(2, 1)};
  EXPECT_THROW(gcd_solve_matrix(singular, DenseMatrix::Zero(2, 1)), RankDeficiencyError);
}
