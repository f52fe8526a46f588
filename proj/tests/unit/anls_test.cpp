#include <gtest/gtest.h>

#include "oracles.hpp"
#include "symnmf/anls.hpp"
#include "symnmf/error.hpp"

using namespace symnmf;

TEST(AnlsNmf, RankOneIsRecovered) {
  const DenseMatrix u = oracle::random_matrix(12, 1, 1, 0.1, 1.0);
  const DenseMatrix v = oracle::random_matrix(9, 1, 2, 0.1, 1.0);
  const DenseMatrix m = u * v.transpose();
  int recovered = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (const InnerSolver& inner : {InnerSolver{BppInner{}}, InnerSolver{GcdInner{}}}) {
      AnlsStop stop;
      stop.max_iterations = 50;
      const AnlsResult r = anls_nmf(m, 1, inner, oracle::random_matrix(12, 1, seed), stop);
      if (r.errors.back() < 1e-6 * m.squaredNorm()) ++recovered;
    }
  }
  EXPECT_GE(recovered, 8);
}

TEST(AnlsNmf, ExactInnerSolverIsMonotone) {
  // At full rank a factor column can vanish, which is reported as rank
  // deficiency; such runs are skipped, the rest must be monotone.
  int completed = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const DenseMatrix m = oracle::random_matrix(8, 6, seed);
    AnlsStop stop;
    stop.max_iterations = 30;
    stop.rel_tol = 0.0;
    AnlsResult r;
    try {
      r = anls_nmf(m, 6, BppInner{}, oracle::random_matrix(8, 6, seed + 10), stop);
    } catch (const RankDeficiencyError&) {
      continue;
    }
    ++completed;
    for (std::size_t i = 1; i < r.errors.size(); ++i) EXPECT_LE(r.errors[i], r.errors[i - 1] * (1 + 1e-12));
    EXPECT_LE(r.errors.back(), r.errors.front() * (1 + 1e-12));
    EXPECT_GE(r.w.minCoeff(), 0.0);
    EXPECT_GE(r.h.minCoeff(), 0.0);
  }
  EXPECT_GE(completed, 3);
}

TEST(AnlsNmf, GreedyInnerSolverIsMonotone) {
  // Warm-started GCD never increases a subproblem objective.
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const DenseMatrix m = oracle::random_matrix(12, 10, seed, 0.5, 1.0);
    AnlsStop stop;
    stop.max_iterations = 30;
    stop.rel_tol = 0.0;
    const AnlsResult r = anls_nmf(m, 2, GcdInner{}, oracle::random_matrix(12, 2, seed + 10), stop);
    for (std::size_t i = 1; i < r.errors.size(); ++i) EXPECT_LE(r.errors[i], r.errors[i - 1] * (1 + 1e-12));
  }
}

TEST(AnlsNmf, FullRankFactorization) {
  const DenseMatrix m = oracle::random_matrix(7, 5, 3);
  AnlsStop stop;
  stop.max_iterations = 100;
  const AnlsResult r = anls_nmf(m, 5, BppInner{}, oracle::random_matrix(7, 5, 4), stop);
  EXPECT_LE(r.errors.back(), r.errors.front());
}

TEST(AnlsNmf, ZeroMatrix) {
  const AnlsResult r = anls_nmf(DenseMatrix::Zero(4, 3), 2, GcdInner{}, oracle::random_matrix(4, 2, 1));
  EXPECT_EQ(r.errors, std::vector<double>{0.0});
  EXPECT_EQ(r.w, DenseMatrix::Zero(4, 2));
  EXPECT_EQ(r.h, DenseMatrix::Zero(3, 2));
  EXPECT_TRUE(r.converged);
}

TEST(AnlsNmf, CorrectionsAreCounted) {
  const DenseMatrix m = oracle::random_matrix(10, 8, 6);
  const AnlsResult r = anls_nmf(m, 3, GcdInner{}, oracle::random_matrix(10, 3, 7));
  EXPECT_GT(r.stats.corrections, 0);
  EXPECT_EQ(r.stats.bpp.cholesky, 0);
}

TEST(AnlsNmf, InputValidation) {
  const DenseMatrix m = oracle::random_matrix(4, 4, 1);
  const DenseMatrix w0 = oracle::random_matrix(4, 2, 2);
  EXPECT_THROW(anls_nmf(-m, 2, BppInner{}, w0), InvalidInputError);
  EXPECT_THROW(anls_nmf(m, 0, BppInner{}, w0), InvalidInputError);
  EXPECT_THROW(anls_nmf(m, 3, BppInner{}, w0), DimensionError);
  EXPECT_THROW(anls_nmf(m, 2, BppInner{}, -w0), InvalidInputError);
}

TEST(AnlsNmf, InnerFailuresCarryIterationContext) {
  // Two identical columns in W0 make the first H Gram matrix singular.
  const DenseMatrix m = oracle::random_matrix(5, 5, 3);
  DenseMatrix w0(5, 2);
  w0.col(0) = oracle::random_matrix(5, 1, 4).col(0);
  w0.col(1) = w0.col(0);
  try {
    anls_nmf(m, 2, BppInner{}, w0);
    FAIL() << "expected RankDeficiencyError";
  } catch (const RankDeficiencyError& e) {
    EXPECT_NE(std::string(e.what()).find("outer iteration 1"), std::string::npos) << e.what();
  }
}
