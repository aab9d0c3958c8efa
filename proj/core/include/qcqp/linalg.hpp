#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qcqp {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Dense real symmetric matrix. The constructor averages the input with its
/// transpose, so both triangles agree exactly afterwards.
class SymMatrix {
 public:
  using Scalar = double;

  SymMatrix() = default;
  explicit SymMatrix(const Matrix& m);

  static SymMatrix identity(Index n) { return SymMatrix(Matrix::Identity(n, n)); }
  static SymMatrix diagonal(const Vector& d) { return SymMatrix(Matrix(d.asDiagonal())); }

  Index size() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double operator()(Index i, Index j) const { return m_(i, j); }

 private:
  Matrix m_;
};

/// Dense complex Hermitian matrix; diagonal imaginary parts are zeroed.
class HermMatrix {
 public:
  using Scalar = Complex;

  HermMatrix() = default;
  explicit HermMatrix(const CMatrix& m);

  static HermMatrix identity(Index n) { return HermMatrix(CMatrix::Identity(n, n)); }

  Index size() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(Index i, Index j) const { return m_(i, j); }

 private:
  CMatrix m_;
};

/// Eigen-decomposition M = V diag(w) V^H with w ascending.
template <typename Scalar>
struct BasicEvd {
  Vector eigenvalues;
  DenseMatrix<Scalar> vectors;
};
using Evd = BasicEvd<double>;
using HermEvd = BasicEvd<Complex>;

template <typename Scalar>
struct InvSqrtFactor {
  DenseMatrix<Scalar> s_inv;  // undefined when rank_ok is false
  bool rank_ok = false;
};

namespace linalg {

/// Default numerical-rank threshold, relative to the largest eigenvalue.
double default_eps_rank(Index n);

Evd sym_evd(const SymMatrix& m);
HermEvd herm_evd(const HermMatrix& m);

// S_inv = diag(w)^{-1/2} U^H, so that S_inv A S_inv^H = I. rank_ok is false
// when some eigenvalue is not above eps_rank * max(1, lambda_max).
InvSqrtFactor<double> inv_sqrt_factor(const SymMatrix& a, double eps_rank);
InvSqrtFactor<Complex> inv_sqrt_factor(const HermMatrix& a, double eps_rank);

/// Moore-Penrose pseudo-inverse of a PSD matrix; eigenvalues at or below
/// eps_rank * lambda_max are treated as zero.
Matrix pinv_psd(const SymMatrix& b, double eps_rank);

/// Orthonormal basis (N x (N-p)) of the null space of a full-row-rank p x N matrix.
Matrix null_space_basis(const Matrix& a2, double eps_rank);

bool all_finite(const Matrix& m);
bool all_finite(const CMatrix& m);

}  // namespace linalg
}  // namespace qcqp
