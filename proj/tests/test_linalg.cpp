#include <gtest/gtest.h>

#include <limits>

#include "test_support.hpp"

namespace qcqp {
namespace {

using testing::random_hermitian;
using testing::random_spd;
using testing::random_symmetric;

TEST(SymMatrix, ConstructorSymmetrizesExactly) {
  Matrix m(2, 2);
  m << 1.0, 2.0, 4.0, 3.0;
  const SymMatrix s(m);
  EXPECT_EQ(s(0, 1), s(1, 0));
  EXPECT_DOUBLE_EQ(s(0, 1), 3.0);
}

TEST(SymMatrix, RejectsNonSquare) {
  EXPECT_THROW(SymMatrix(Matrix(2, 3)), Error);
}

TEST(HermMatrix, DiagonalImaginaryPartsAreZero) {
  CMatrix m(2, 2);
  m << Complex(1, 0.5), Complex(2, 1), Complex(0, 0), Complex(3, -2);
  const HermMatrix h(m);
  EXPECT_EQ(h(0, 0).imag(), 0.0);
  EXPECT_EQ(h(1, 1).imag(), 0.0);
  EXPECT_EQ(h(0, 1), std::conj(h(1, 0)));
}

TEST(SymEvd, Identity) {
  const Evd evd = linalg::sym_evd(SymMatrix::identity(3));
  EXPECT_TRUE(evd.eigenvalues.isApprox(Vector::Ones(3)));
  EXPECT_LE((evd.vectors.transpose() * evd.vectors - Matrix::Identity(3, 3)).norm(), 1e-12);
}

TEST(SymEvd, DiagonalInputIsSortedAscending) {
  const Evd evd = linalg::sym_evd(SymMatrix::diagonal(Vector{{3.0, 1.0}}));
  EXPECT_DOUBLE_EQ(evd.eigenvalues(0), 1.0);
  EXPECT_DOUBLE_EQ(evd.eigenvalues(1), 3.0);
  EXPECT_NEAR(std::abs(evd.vectors(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(evd.vectors(0, 1)), 1.0, 1e-15);
}

TEST(SymEvd, RandomReconstruction) {
  Rng rng(7);
  const SymMatrix m(random_symmetric(8, rng));
  const Evd evd = linalg::sym_evd(m);
  const Matrix back = evd.vectors * evd.eigenvalues.asDiagonal() * evd.vectors.transpose();
  EXPECT_LE((back - m.matrix()).norm(), 1e-10 * (1.0 + m.matrix().norm()));
}

TEST(SymEvd, ContractsOnManySizes) {
  Rng rng(100);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + trial % 49;
    const SymMatrix m(random_symmetric(n, rng));
    const Evd evd = linalg::sym_evd(m);
    const Matrix& v = evd.vectors;
    EXPECT_LE((v.transpose() * v - Matrix::Identity(n, n)).norm(), 1e-12 * n);
    const Matrix back = v * evd.eigenvalues.asDiagonal() * v.transpose();
    EXPECT_LE((back - m.matrix()).norm(), 1e-10 * (1.0 + m.matrix().norm()));
    for (Index i = 1; i < n; ++i) EXPECT_LE(evd.eigenvalues(i - 1), evd.eigenvalues(i));
  }
}

TEST(SymEvd, RejectsNonFinite) {
  Matrix m = Matrix::Identity(2, 2);
  m(0, 0) = std::numeric_limits<double>::quiet_NaN();
  try {
    linalg::sym_evd(SymMatrix(m));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFinite);
  }
}

TEST(HermEvd, Identity) {
  const HermEvd evd = linalg::herm_evd(HermMatrix::identity(2));
  EXPECT_TRUE(evd.eigenvalues.isApprox(Vector::Ones(2)));
}

TEST(HermEvd, TwoByTwoClosedForm) {
  CMatrix m(2, 2);
  m << 2.0, Complex(0, 1), Complex(0, -1), 2.0;
  const HermEvd evd = linalg::herm_evd(HermMatrix(m));
  EXPECT_NEAR(evd.eigenvalues(0), 1.0, 1e-14);
  EXPECT_NEAR(evd.eigenvalues(1), 3.0, 1e-14);
}

TEST(HermEvd, RandomReconstruction) {
  Rng rng(3);
  const HermMatrix m(random_hermitian(6, rng));
  const HermEvd evd = linalg::herm_evd(m);
  const CMatrix& v = evd.vectors;
  EXPECT_LE((v.adjoint() * v - CMatrix::Identity(6, 6)).norm(), 1e-12 * 6);
  const CMatrix back = v * evd.eigenvalues.cast<Complex>().asDiagonal() * v.adjoint();
  EXPECT_LE((back - m.matrix()).norm(), 1e-10 * (1.0 + m.matrix().norm()));
}

TEST(InvSqrtFactor, ScaledIdentity) {
  const auto f = linalg::inv_sqrt_factor(SymMatrix(4.0 * Matrix::Identity(3, 3)), 1e-12);
  ASSERT_TRUE(f.rank_ok);
  EXPECT_LE((f.s_inv.cwiseAbs() - 0.5 * Matrix::Identity(3, 3)).norm(), 1e-15);
}

TEST(InvSqrtFactor, BelowThresholdIsNotOk) {
  const auto f = linalg::inv_sqrt_factor(SymMatrix::diagonal(Vector{{1.0, 1e-18}}), 1e-12);
  EXPECT_FALSE(f.rank_ok);
}

TEST(InvSqrtFactor, WhitensRandomSpd) {
  Rng rng(1);
  const SymMatrix a(random_spd(10, rng));
  const auto f = linalg::inv_sqrt_factor(a, linalg::default_eps_rank(10));
  ASSERT_TRUE(f.rank_ok);
  EXPECT_LE((f.s_inv * a.matrix() * f.s_inv.transpose() - Matrix::Identity(10, 10)).norm(),
            1e-8 * 10);
}

TEST(InvSqrtFactor, WhitensRandomHermitian) {
  Rng rng(2);
  const CMatrix f = rng.complex_normal_matrix(5, 5);
  const HermMatrix a(f * f.adjoint() + 0.1 * CMatrix::Identity(5, 5));
  const auto w = linalg::inv_sqrt_factor(a, 1e-12);
  ASSERT_TRUE(w.rank_ok);
  EXPECT_LE((w.s_inv * a.matrix() * w.s_inv.adjoint() - CMatrix::Identity(5, 5)).norm(), 1e-8 * 5);
}

TEST(PinvPsd, DiagonalWithZero) {
  const Matrix p = linalg::pinv_psd(SymMatrix::diagonal(Vector{{2.0, 0.0}}), 1e-12);
  EXPECT_LE((p - Matrix(Vector{{0.5, 0.0}}.asDiagonal())).norm(), 1e-15);
}

TEST(PinvPsd, Identity) {
  EXPECT_LE((linalg::pinv_psd(SymMatrix::identity(3), 1e-12) - Matrix::Identity(3, 3)).norm(),
            1e-15);
}

TEST(PinvPsd, PenroseConditionsOnLowRank) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix f = rng.normal_matrix(5, 2);
    const Matrix b = f * f.transpose();
    const Matrix p = linalg::pinv_psd(SymMatrix(b), linalg::default_eps_rank(5));
    const double tol = 1e-8 * b.norm();
    EXPECT_LE((b * p * b - b).norm(), tol);
    EXPECT_LE((p * b * p - p).norm(), tol * std::max(1.0, p.norm() * p.norm()));
    EXPECT_LE((b * p - (b * p).transpose()).norm(), tol);
    EXPECT_LE((p * b - (p * b).transpose()).norm(), tol);
  }
}

TEST(PinvPsd, RejectsIndefinite) {
  try {
    linalg::pinv_psd(SymMatrix::diagonal(Vector{{1.0, -1.0}}), 1e-12);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPsd);
  }
}

TEST(NullSpaceBasis, SingleRow) {
  const Matrix basis = linalg::null_space_basis(Matrix{{1.0, 0.0}}, 1e-12);
  ASSERT_EQ(basis.cols(), 1);
  EXPECT_NEAR(basis(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(basis(1, 0)), 1.0, 1e-15);
}

TEST(NullSpaceBasis, FullRankSquareGivesEmptyBasis) {
  const Matrix basis = linalg::null_space_basis(Matrix::Identity(3, 3), 1e-12);
  EXPECT_EQ(basis.rows(), 3);
  EXPECT_EQ(basis.cols(), 0);
}

TEST(NullSpaceBasis, RandomRowsAreAnnihilated) {
  Rng rng(9);
  const Matrix a2 = rng.normal_matrix(2, 5);
  const Matrix basis = linalg::null_space_basis(a2, linalg::default_eps_rank(5));
  ASSERT_EQ(basis.cols(), 3);
  EXPECT_LE((a2 * basis).norm(), 1e-10 * a2.norm());
  EXPECT_LE((basis.transpose() * basis - Matrix::Identity(3, 3)).norm(), 1e-12);
}

TEST(NullSpaceBasis, DependentRowsAreRejected) {
  Matrix a2(2, 3);
  a2 << 1, 2, 3, 2, 4, 6;
  try {
    linalg::null_space_basis(a2, 1e-12);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankDeficientRows);
  }
}

}  // namespace
}  // namespace qcqp
