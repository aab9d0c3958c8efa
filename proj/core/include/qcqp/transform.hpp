#pragma once

#include "qcqp/linalg.hpp"
#include "qcqp/problem.hpp"

namespace qcqp {

enum class SimDiagVariant {
  PdConstraint,  // A0 = T diag(a) T^T, A1 = T T^T
  PsdRank,       // A0 = T diag(a) T^T, A1 = T [I_r 0; 0 0] T^T
  PdObjective,   // A0 = T T^T, A1 = T diag(a) T^T
};

/// Congruence that diagonalizes a matrix pair. Only T^{-1} is stored; T is
/// never formed on the solve path.
template <typename Scalar>
struct BasicSimDiag {
  DenseMatrix<Scalar> t_inv;
  Vector a;
  SimDiagVariant variant = SimDiagVariant::PdConstraint;
  Index rank = 0;

  Index size() const { return a.size(); }
  /// Explicit T, for diagnostics and reconstruction checks.
  DenseMatrix<Scalar> explicit_t() const { return t_inv.inverse(); }
};
using SimDiag = BasicSimDiag<double>;
using HermSimDiag = BasicSimDiag<Complex>;

/// Real vector problem after the affine change of variables y = T^T x + shift.
///
/// PdConstraint:  min y'diag(a)y - 2b'y   s.t. y'y = c
/// PsdRank:       min y'diag(a)y - 2b'y   s.t. sum_{i<r} y_i^2 + 2 b_c'y = c
/// PdObjective:   min y'y - 2b'y          s.t. y'diag(a)y = c
///
/// In every case objective(x) = decoupled objective(y) + constant.
struct DecoupledProblem {
  SimDiagVariant variant = SimDiagVariant::PdConstraint;
  Matrix t_inv;
  Vector a;
  Vector b;
  double c = 0.0;
  Index rank = 0;
  Vector b_c;  // PsdRank only; first `rank` entries are zero
  Vector shift;
  double constant = 0.0;

  Index size() const { return a.size(); }
  Vector to_decoupled(const Vector& x) const;
  Vector recover(const Vector& y) const;
  double objective(const Vector& y) const;
  double constraint(const Vector& y) const;
};

/// Matrix-variable analogue: Y = T^H X + shift,
///   min sum_j a_j |Y_j,:|^2 - 2 Re Tr(B^H Y)   s.t. ||Y||_F^2 = c.
struct DecoupledMatrixProblem {
  CMatrix t_inv;
  Vector a;
  CMatrix b;
  double c = 0.0;
  CMatrix shift;
  double constant = 0.0;

  CMatrix to_decoupled(const CMatrix& x) const;
  CMatrix recover(const CMatrix& y) const;
  double objective(const CMatrix& y) const;
  double constraint(const CMatrix& y) const;
};

/// Result of eliminating A2 x = b2 through x = x_p + basis * x_tilde.
struct LinearReduction {
  RealQcqp reduced;
  Vector x_p;
  Matrix basis;

  Vector embed(const Vector& x_tilde) const { return x_p + basis * x_tilde; }
};

namespace transform {

SimDiag simdiag_pd(const SymMatrix& a0, const SymMatrix& a1, double eps_rank);
HermSimDiag simdiag_pd(const HermMatrix& a0, const HermMatrix& a1, double eps_rank);

/// PSD pair with rank(A1) = r < N, via block elimination with B22^+.
SimDiag simdiag_psd(const SymMatrix& a0, const SymMatrix& a1, double eps_rank);

/// A0 positive definite, A1 indefinite and nonsingular.
SimDiag simdiag_indefinite(const SymMatrix& a0, const SymMatrix& a1, double eps_rank);

/// Affine decoupling matching sd.variant. Throws InfeasibleConstraint for the
/// PdConstraint variant when the constraint set is empty.
DecoupledProblem decouple(const RealQcqp& problem, const SimDiag& sd);
DecoupledMatrixProblem decouple(const ComplexQcqp& problem, const HermSimDiag& sd);

/// Tolerance below which the decoupled radius c counts as zero.
double radius_tolerance(double c1);

LinearReduction reduce_linear(const RealQcqp& problem, const LinearEqualities& linear,
                              double eps_rank);
LinearReduction reduce_linear(const QcqpInstance& instance, double eps_rank);

Vector recover_x(const Vector& y_star, const DecoupledProblem& dp);
Vector recover_x(const Vector& y_star, const DecoupledProblem& dp,
                 const LinearReduction& reduction);
CMatrix recover_x(const CMatrix& y_star, const DecoupledMatrixProblem& dp);

}  // namespace transform
}  // namespace qcqp
