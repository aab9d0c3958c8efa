#include "qcqp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qcqp/error.hpp"

namespace qcqp {

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "symmetric matrix must be square, got " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()));
  }
  m_ = 0.5 * (m + m.transpose());
}

HermMatrix::HermMatrix(const CMatrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "Hermitian matrix must be square, got " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()));
  }
  m_ = 0.5 * (m + m.adjoint());
  for (Index i = 0; i < m_.rows(); ++i) m_(i, i) = Complex(m_(i, i).real(), 0.0);
}

namespace linalg {

bool all_finite(const Matrix& m) { return m.allFinite(); }

bool all_finite(const CMatrix& m) {
  return m.real().allFinite() && m.imag().allFinite();
}

double default_eps_rank(Index n) {
  return static_cast<double>(std::max<Index>(n, 1)) * std::numeric_limits<double>::epsilon();
}

namespace {

template <typename MatrixType>
BasicEvd<typename MatrixType::Scalar> evd_impl(const MatrixType& m) {
  using Scalar = typename MatrixType::Scalar;
  if (m.rows() < 1) throw Error(ErrorCode::InvalidArgument, "EVD of an empty matrix");
  if (!all_finite(m)) throw Error(ErrorCode::NonFinite, "EVD input contains NaN or Inf");
  // SelfAdjointEigenSolver returns eigenvalues in increasing order.
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> solver(m, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "symmetric eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

template <typename Scalar>
InvSqrtFactor<Scalar> inv_sqrt_impl(const BasicEvd<Scalar>& evd, double eps_rank) {
  InvSqrtFactor<Scalar> out;
  const Vector& w = evd.eigenvalues;
  const double threshold = eps_rank * std::max(1.0, w.maxCoeff());
  if (!(w.minCoeff() > threshold)) return out;
  const Vector scale = w.array().rsqrt();
  out.s_inv = scale.asDiagonal() * evd.vectors.adjoint();
  out.rank_ok = true;
  return out;
}

}  // namespace

Evd sym_evd(const SymMatrix& m) { return evd_impl(m.matrix()); }

HermEvd herm_evd(const HermMatrix& m) { return evd_impl(m.matrix()); }

InvSqrtFactor<double> inv_sqrt_factor(const SymMatrix& a, double eps_rank) {
  return inv_sqrt_impl(sym_evd(a), eps_rank);
}

InvSqrtFactor<Complex> inv_sqrt_factor(const HermMatrix& a, double eps_rank) {
  return inv_sqrt_impl(herm_evd(a), eps_rank);
}

Matrix pinv_psd(const SymMatrix& b, double eps_rank) {
  const Evd evd = sym_evd(b);
  const Vector& w = evd.eigenvalues;
  const double lambda_max = w.maxCoeff();
  if (w.minCoeff() < -1e-8 * std::max(1.0, lambda_max)) {
    throw Error(ErrorCode::NotPsd, "pseudo-inverse input has eigenvalue " +
                                       std::to_string(w.minCoeff()));
  }
  const double threshold = eps_rank * std::max(lambda_max, 0.0);
  Vector inv_w(w.size());
  for (Index i = 0; i < w.size(); ++i) inv_w(i) = w(i) > threshold ? 1.0 / w(i) : 0.0;
  Matrix out = evd.vectors * inv_w.asDiagonal() * evd.vectors.transpose();
  return 0.5 * (out + out.transpose());
}

Matrix null_space_basis(const Matrix& a2, double eps_rank) {
  const Index p = a2.rows();
  const Index n = a2.cols();
  if (p > n) {
    throw Error(ErrorCode::DimensionMismatch,
                "more linear constraints (" + std::to_string(p) + ") than variables (" +
                    std::to_string(n) + ")");
  }
  if (p == 0) return Matrix::Identity(n, n);
  if (!a2.allFinite()) throw Error(ErrorCode::NonFinite, "A2 contains NaN or Inf");

  const Evd gram = sym_evd(SymMatrix(a2 * a2.transpose()));
  const double lambda_max = gram.eigenvalues.maxCoeff();
  if (!(lambda_max > 0.0) || !(gram.eigenvalues.minCoeff() > eps_rank * lambda_max)) {
    throw Error(ErrorCode::RankDeficientRows, "linear constraint rows are linearly dependent");
  }

  // The trailing N-p columns of the full Q factor of A2^T span null(A2).
  Eigen::HouseholderQR<Matrix> qr(a2.transpose());
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return q.rightCols(n - p);
}

}  // namespace linalg
}  // namespace qcqp
