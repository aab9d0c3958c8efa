#include "qcqp/transform.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>

#include "qcqp/error.hpp"

namespace qcqp {

Vector DecoupledProblem::to_decoupled(const Vector& x) const {
  // T^T x solves (T^{-1})^T z = x.
  return t_inv.transpose().partialPivLu().solve(x) + shift;
}

Vector DecoupledProblem::recover(const Vector& y) const {
  return t_inv.transpose() * (y - shift);
}

double DecoupledProblem::objective(const Vector& y) const {
  if (variant == SimDiagVariant::PdObjective) return y.squaredNorm() - 2.0 * b.dot(y);
  return y.dot(a.cwiseProduct(y)) - 2.0 * b.dot(y);
}

double DecoupledProblem::constraint(const Vector& y) const {
  switch (variant) {
    case SimDiagVariant::PdConstraint:
      return y.squaredNorm() - c;
    case SimDiagVariant::PsdRank:
      return y.head(rank).squaredNorm() + 2.0 * b_c.dot(y) - c;
    case SimDiagVariant::PdObjective:
      return y.dot(a.cwiseProduct(y)) - c;
  }
  return 0.0;
}

CMatrix DecoupledMatrixProblem::to_decoupled(const CMatrix& x) const {
  return t_inv.adjoint().partialPivLu().solve(x) + shift;
}

CMatrix DecoupledMatrixProblem::recover(const CMatrix& y) const {
  return t_inv.adjoint() * (y - shift);
}

double DecoupledMatrixProblem::objective(const CMatrix& y) const {
  return (a.asDiagonal() * y.cwiseAbs2()).sum() - 2.0 * (b.adjoint() * y).trace().real();
}

double DecoupledMatrixProblem::constraint(const CMatrix& y) const {
  return y.squaredNorm() - c;
}

namespace transform {
namespace {

template <typename Herm>
BasicSimDiag<typename Herm::Scalar> simdiag_pd_impl(const Herm& a0, const Herm& a1,
                                                     double eps_rank) {
  if (a0.size() != a1.size()) {
    throw Error(ErrorCode::DimensionMismatch, "A0 and A1 differ in size");
  }
  const auto whitening = linalg::inv_sqrt_factor(a1, eps_rank);
  if (!whitening.rank_ok) {
    throw Error(ErrorCode::NotPositiveDefinite, "A1 is not numerically positive definite");
  }
  const auto& s_inv = whitening.s_inv;
  const Herm whitened(s_inv * a0.matrix() * s_inv.adjoint());
  const auto evd = [&] {
    if constexpr (std::is_same_v<Herm, SymMatrix>) {
      return linalg::sym_evd(whitened);
    } else {
      return linalg::herm_evd(whitened);
    }
  }();
  BasicSimDiag<typename Herm::Scalar> out;
  out.t_inv = evd.vectors.adjoint() * s_inv;
  out.a = evd.eigenvalues;
  out.variant = SimDiagVariant::PdConstraint;
  out.rank = a0.size();
  return out;
}

}  // namespace

SimDiag simdiag_pd(const SymMatrix& a0, const SymMatrix& a1, double eps_rank) {
  return simdiag_pd_impl(a0, a1, eps_rank);
}

HermSimDiag simdiag_pd(const HermMatrix& a0, const HermMatrix& a1, double eps_rank) {
  return simdiag_pd_impl(a0, a1, eps_rank);
}

SimDiag simdiag_psd(const SymMatrix& a0, const SymMatrix& a1, double eps_rank) {
  const Index n = a0.size();
  if (a1.size() != n) throw Error(ErrorCode::DimensionMismatch, "A0 and A1 differ in size");

  const Evd evd0 = linalg::sym_evd(a0);
  if (evd0.eigenvalues.minCoeff() < -1e-8 * std::max(1.0, evd0.eigenvalues.maxCoeff())) {
    throw Error(ErrorCode::NotPsd, "A0 has eigenvalue " + std::to_string(evd0.eigenvalues.minCoeff()));
  }
  const Evd evd1 = linalg::sym_evd(a1);
  const Vector& w = evd1.eigenvalues;
  const double w_max = w.maxCoeff();
  if (w.minCoeff() < -1e-8 * std::max(1.0, w_max)) {
    throw Error(ErrorCode::NotPsd, "A1 has eigenvalue " + std::to_string(w.minCoeff()));
  }
  if (!(w_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "A1 is numerically zero");

  const double threshold = eps_rank * w_max;
  const Index r = (w.array() > threshold).count();
  if (r == n) throw Error(ErrorCode::FullRank, "A1 has full rank; use the definite path");
  const Index k = n - r;

  // Eigenvalues are ascending, so the range of A1 is spanned by the last r vectors.
  // S1^{-1} = [diag(w_r)^{-1/2} U_r^T ; U_0^T] gives A1 = S1 [I 0; 0 0] S1^T.
  Matrix s1_inv(n, n);
  s1_inv.topRows(r) = w.tail(r).array().rsqrt().matrix().asDiagonal() *
                      evd1.vectors.rightCols(r).transpose();
  s1_inv.bottomRows(k) = evd1.vectors.leftCols(k).transpose();

  const Matrix blocks = SymMatrix(s1_inv * a0.matrix() * s1_inv.transpose()).matrix();
  const Matrix b11 = blocks.topLeftCorner(r, r);
  const Matrix b12 = blocks.topRightCorner(r, k);
  const SymMatrix b22(blocks.bottomRightCorner(k, k));

  const Matrix coupling = b12 * linalg::pinv_psd(b22, eps_rank);
  const SymMatrix schur(b11 - coupling * b12.transpose());

  const Evd evd_schur = linalg::sym_evd(schur);
  const Evd evd_b22 = linalg::sym_evd(b22);

  // T^{-1} = S3^T S2^{-1} S1^{-1}, with S2^{-1} = [I -B12 B22^+; 0 I].
  Matrix s21_inv = s1_inv;
  s21_inv.topRows(r) -= coupling * s1_inv.bottomRows(k);

  SimDiag out;
  out.t_inv.resize(n, n);
  out.t_inv.topRows(r) = evd_schur.vectors.transpose() * s21_inv.topRows(r);
  out.t_inv.bottomRows(k) = evd_b22.vectors.transpose() * s21_inv.bottomRows(k);
  out.a.resize(n);
  out.a << evd_schur.eigenvalues, evd_b22.eigenvalues;
  out.variant = SimDiagVariant::PsdRank;
  out.rank = r;
  return out;
}

SimDiag simdiag_indefinite(const SymMatrix& a0, const SymMatrix& a1, double eps_rank) {
  if (a0.size() != a1.size()) {
    throw Error(ErrorCode::DimensionMismatch, "A0 and A1 differ in size");
  }
  const auto whitening = linalg::inv_sqrt_factor(a0, eps_rank);
  if (!whitening.rank_ok) {
    throw Error(ErrorCode::NotPositiveDefinite, "A0 is not numerically positive definite");
  }
  const Evd evd = linalg::sym_evd(
      SymMatrix(whitening.s_inv * a1.matrix() * whitening.s_inv.transpose()));
  const Vector& a = evd.eigenvalues;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if (!(a.cwiseAbs().minCoeff() > eps_rank * scale)) {
    throw Error(ErrorCode::SingularConstraintMatrix,
                "whitened A1 has an eigenvalue within eps_rank of zero");
  }
  if (!(a(0) < 0.0 && a(a.size() - 1) > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "A1 is definite, not indefinite");
  }
  SimDiag out;
  out.t_inv = evd.vectors.transpose() * whitening.s_inv;
  out.a = a;
  out.variant = SimDiagVariant::PdObjective;
  out.rank = a0.size();
  return out;
}

double radius_tolerance(double c1) { return 1e-10 * (1.0 + std::abs(c1)); }

DecoupledProblem decouple(const RealQcqp& problem, const SimDiag& sd) {
  problem.validate();
  if (sd.size() != problem.size()) {
    throw Error(ErrorCode::DimensionMismatch, "diagonalization does not match the problem size");
  }
  const Vector d = sd.t_inv * problem.b1;
  const Vector e = sd.t_inv * problem.b0;

  DecoupledProblem out;
  out.variant = sd.variant;
  out.t_inv = sd.t_inv;
  out.a = sd.a;
  out.rank = sd.rank;
  switch (sd.variant) {
    case SimDiagVariant::PdConstraint: {
      out.b = sd.a.cwiseProduct(d) - e;
      out.c = d.squaredNorm() - problem.c1;
      out.shift = d;
      out.constant = d.dot(sd.a.cwiseProduct(d)) - 2.0 * e.dot(d) + problem.c0;
      if (out.c < -radius_tolerance(problem.c1)) {
        throw Error(ErrorCode::InfeasibleConstraint,
                    "constraint set is empty (decoupled radius " + std::to_string(out.c) + ")");
      }
      break;
    }
    case SimDiagVariant::PsdRank: {
      const Index tail = sd.size() - sd.rank;
      out.b = sd.a.cwiseProduct(d) - e;
      out.b_c = Vector::Zero(sd.size());
      out.b_c.tail(tail) = d.tail(tail);
      out.c = d.squaredNorm() + d.tail(tail).squaredNorm() - problem.c1;
      out.shift = d;
      out.constant = d.dot(sd.a.cwiseProduct(d)) - 2.0 * e.dot(d) + problem.c0;
      break;
    }
    case SimDiagVariant::PdObjective: {
      const Vector g = d.cwiseQuotient(sd.a);
      out.b = g - e;
      out.c = d.dot(g) - problem.c1;
      out.shift = g;
      out.constant = g.squaredNorm() - 2.0 * e.dot(g) + problem.c0;
      break;
    }
  }
  return out;
}

DecoupledMatrixProblem decouple(const ComplexQcqp& problem, const HermSimDiag& sd) {
  problem.validate();
  if (sd.size() != problem.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "diagonalization does not match the problem size");
  }
  if (sd.variant != SimDiagVariant::PdConstraint) {
    throw Error(ErrorCode::InvalidArgument, "matrix problems need A1 positive definite");
  }
  const CMatrix d = sd.t_inv * problem.b1;
  const CMatrix e = sd.t_inv * problem.b0;

  DecoupledMatrixProblem out;
  out.t_inv = sd.t_inv;
  out.a = sd.a;
  out.b = sd.a.asDiagonal() * d - e;
  out.c = d.squaredNorm() - problem.c1;
  out.shift = d;
  out.constant = (d.adjoint() * sd.a.asDiagonal() * d).trace().real() -
                 2.0 * (e.adjoint() * d).trace().real() + problem.c0;
  if (out.c < -radius_tolerance(problem.c1)) {
    throw Error(ErrorCode::InfeasibleConstraint,
                "constraint set is empty (decoupled radius " + std::to_string(out.c) + ")");
  }
  return out;
}

LinearReduction reduce_linear(const RealQcqp& problem, const LinearEqualities& linear,
                              double eps_rank) {
  problem.validate();
  const Index n = problem.size();
  const Index p = linear.rows();
  if (linear.a2.cols() != n || linear.b2.size() != p) {
    throw Error(ErrorCode::DimensionMismatch, "A2/b2 shapes do not match the variable");
  }
  if (p >= n) {
    throw Error(ErrorCode::DimensionMismatch,
                "linear equalities leave no free dimension (p=" + std::to_string(p) +
                    ", N=" + std::to_string(n) + ")");
  }

  LinearReduction out;
  if (p == 0) {
    out.reduced = problem;
    out.x_p = Vector::Zero(n);
    out.basis = Matrix::Identity(n, n);
    return out;
  }

  out.basis = linalg::null_space_basis(linear.a2, eps_rank);
  const Matrix& a2 = linear.a2;
  out.x_p = a2.transpose() * (a2 * a2.transpose()).llt().solve(linear.b2);
  // One refinement step keeps A2 x_p = b2 to working precision.
  out.x_p += a2.transpose() * (a2 * a2.transpose()).llt().solve(linear.b2 - a2 * out.x_p);

  const Matrix& n_perp = out.basis;
  const Vector& xp = out.x_p;
  const Matrix& a0 = problem.a0.matrix();
  const Matrix& a1 = problem.a1.matrix();
  out.reduced.a0 = SymMatrix(n_perp.transpose() * a0 * n_perp);
  out.reduced.b0 = n_perp.transpose() * (a0 * xp + problem.b0);
  out.reduced.c0 = xp.dot(a0 * xp) + 2.0 * problem.b0.dot(xp) + problem.c0;
  out.reduced.a1 = SymMatrix(n_perp.transpose() * a1 * n_perp);
  out.reduced.b1 = n_perp.transpose() * (a1 * xp + problem.b1);
  out.reduced.c1 = xp.dot(a1 * xp) + 2.0 * problem.b1.dot(xp) + problem.c1;
  return out;
}

LinearReduction reduce_linear(const QcqpInstance& instance, double eps_rank) {
  const RealQcqp& problem = instance.real_problem();
  if (!instance.linear) {
    return reduce_linear(problem, LinearEqualities{Matrix(0, problem.size()), Vector(0)},
                         eps_rank);
  }
  return reduce_linear(problem, *instance.linear, eps_rank);
}

Vector recover_x(const Vector& y_star, const DecoupledProblem& dp) {
  if (y_star.size() != dp.size()) {
    throw Error(ErrorCode::DimensionMismatch, "y has the wrong dimension");
  }
  return dp.recover(y_star);
}

Vector recover_x(const Vector& y_star, const DecoupledProblem& dp,
                 const LinearReduction& reduction) {
  return reduction.embed(recover_x(y_star, dp));
}

CMatrix recover_x(const CMatrix& y_star, const DecoupledMatrixProblem& dp) {
  if (y_star.rows() != dp.a.size() || y_star.cols() != dp.b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "Y has the wrong shape");
  }
  return dp.recover(y_star);
}

}  // namespace transform
}  // namespace qcqp
