#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

namespace qcqp {
namespace {

bool identical(const QcqpInstance& x, const QcqpInstance& y) {
  if (x.kind != y.kind || x.seed != y.seed) return false;
  if (x.is_matrix()) {
    const ComplexQcqp& p = x.complex_problem();
    const ComplexQcqp& q = y.complex_problem();
    return p.a0.matrix() == q.a0.matrix() && p.a1.matrix() == q.a1.matrix() && p.b0 == q.b0 &&
           p.b1 == q.b1 && p.c0 == q.c0 && p.c1 == q.c1;
  }
  const RealQcqp& p = x.real_problem();
  const RealQcqp& q = y.real_problem();
  bool same = p.a0.matrix() == q.a0.matrix() && p.a1.matrix() == q.a1.matrix() && p.b0 == q.b0 &&
              p.b1 == q.b1 && p.c0 == q.c0 && p.c1 == q.c1;
  if (x.linear.has_value() != y.linear.has_value()) return false;
  if (x.linear) same = same && x.linear->a2 == y.linear->a2 && x.linear->b2 == y.linear->b2;
  return same;
}

Index numerical_rank(const Matrix& m) {
  const Vector w = linalg::sym_evd(SymMatrix(m)).eigenvalues;
  const double tol = linalg::default_eps_rank(m.rows()) * w.cwiseAbs().maxCoeff();
  return (w.array().abs() > tol).count();
}

TEST(Rng, UniformUsesTopBitsOfMersenneTwister) {
  std::mt19937_64 engine(12345);
  Rng rng(12345);
  for (int k = 0; k < 100; ++k) {
    EXPECT_EQ(rng.uniform(), static_cast<double>(engine() >> 11) * 0x1.0p-53);
  }
}

TEST(Rng, StandardEngineReference) {
  std::mt19937_64 engine;
  engine.discard(9999);
  EXPECT_EQ(engine(), 9981545732273789042ULL);
}

TEST(Rng, NormalMoments) {
  Rng rng(3);
  const int n = 200000;
  double sum = 0.0, sq = 0.0, chi = 0.0;
  for (int k = 0; k < n; ++k) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
    chi += rng.chi_square1();
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
  EXPECT_NEAR(chi / n, 1.0, 0.02);
}

TEST(Rng, ComplexEntriesHaveUnitVariance) {
  Rng rng(4);
  const CMatrix m = rng.complex_normal_matrix(300, 300);
  EXPECT_NEAR(m.squaredNorm() / (300.0 * 300.0), 1.0, 0.02);
  EXPECT_NEAR(m.real().squaredNorm() / (300.0 * 300.0), 0.5, 0.01);
}

TEST(Rng, UnitVector) {
  Rng rng(5);
  for (Index n : {1, 2, 7}) EXPECT_NEAR(rng.unit_vector(n).norm(), 1.0, 1e-14);
}

TEST(GenSpec, RejectsTinySize) {
  EXPECT_THROW(instances::gen({ProblemKind::Standard, 1, 0}), Error);
}

TEST(Gen, Deterministic) {
  for (ProblemKind kind : {ProblemKind::Standard, ProblemKind::RankDeficient,
                           ProblemKind::Indefinite, ProblemKind::Augmented,
                           ProblemKind::MatrixComplex}) {
    const GenSpec spec{kind, 5, 1};
    EXPECT_TRUE(identical(instances::gen(spec), instances::gen(spec))) << to_string(kind);
    EXPECT_FALSE(identical(instances::gen(spec), instances::gen({kind, 5, 2})));
  }
}

TEST(Gen, SeedIsRecorded) {
  EXPECT_EQ(instances::gen({ProblemKind::Standard, 4, 99}).seed, 99u);
}

TEST(Gen, StandardContracts) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const QcqpInstance inst = instances::gen({ProblemKind::Standard, 2 + seed % 10, seed});
    inst.validate();
    const RealQcqp& p = inst.real_problem();
    EXPECT_GE(linalg::sym_evd(p.a1).eigenvalues(0), 0.1 - 1e-12);
    EXPECT_EQ(p.c0, 0.0);
    const Vector center = p.a1.matrix().llt().solve(p.b1);
    EXPECT_GT(p.b1.dot(center) - p.c1, 0.0);
    const DecoupledProblem dp = transform::decouple(p, transform::simdiag_pd(p.a0, p.a1, 1e-12));
    EXPECT_GT(dp.c, 0.0);
  }
}

TEST(Gen, EpsilonShiftsConstraintMatrix) {
  const QcqpInstance inst = instances::gen({ProblemKind::Standard, 6, 3, 2.0});
  EXPECT_GE(linalg::sym_evd(inst.real_problem().a1).eigenvalues(0), 2.0 - 1e-12);
}

TEST(Gen, RankDeficientRank) {
  const QcqpInstance inst = instances::gen({ProblemKind::RankDeficient, 9, 2});
  EXPECT_EQ(numerical_rank(inst.real_problem().a1.matrix()), 4);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Index n = 2 + seed % 12;
    const QcqpInstance i2 = instances::gen({ProblemKind::RankDeficient, n, seed});
    EXPECT_EQ(numerical_rank(i2.real_problem().a1.matrix()), instances::rank_for(n));
    EXPECT_GE(linalg::sym_evd(i2.real_problem().a0).eigenvalues(0),
              -1e-12 * (1.0 + i2.real_problem().a0.matrix().norm()));
  }
}

TEST(Gen, IndefiniteConstraintHasBothSigns) {
  const QcqpInstance inst = instances::gen({ProblemKind::Indefinite, 7, 3});
  const RealQcqp& p = inst.real_problem();
  const Vector w = linalg::sym_evd(p.a1).eigenvalues;
  EXPECT_LT(w(0), 0.0);
  EXPECT_GT(w(w.size() - 1), 0.0);
  const SimDiag sd = transform::simdiag_indefinite(p.a0, p.a1, linalg::default_eps_rank(7));
  EXPECT_GT(sd.a.cwiseAbs().minCoeff(), 1e-10);
  EXPECT_GT(linalg::sym_evd(p.a0).eigenvalues(0), 0.0);
}

TEST(Gen, AugmentedRowsAndFeasibility) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Index n = 3 + seed % 10;
    const QcqpInstance inst = instances::gen({ProblemKind::Augmented, n, seed});
    ASSERT_TRUE(inst.linear.has_value());
    EXPECT_EQ(inst.linear->rows(), instances::linear_rows_for(n));
    EXPECT_EQ(Eigen::FullPivLU<Matrix>(inst.linear->a2).rank(), inst.linear->rows());
    const LinearReduction red = transform::reduce_linear(inst, linalg::default_eps_rank(n));
    const DecoupledProblem dp = transform::decouple(
        red.reduced, transform::simdiag_pd(red.reduced.a0, red.reduced.a1, 1e-12));
    EXPECT_GT(dp.c, 0.0);
  }
}

TEST(Gen, MatrixShape) {
  const QcqpInstance inst = instances::gen({ProblemKind::MatrixComplex, 6, 7});
  EXPECT_TRUE(inst.is_matrix());
  EXPECT_EQ(inst.n(), 6);
  EXPECT_EQ(inst.n2(), 5);
  const ComplexQcqp& p = inst.complex_problem();
  EXPECT_GE(linalg::herm_evd(p.a1).eigenvalues(0), 0.1 - 1e-12);
}

}  // namespace
}  // namespace qcqp
