#include "qcqp/instances.hpp"

#include <cmath>
#include <string>

#include "qcqp/error.hpp"
#include "qcqp/rng.hpp"
#include "qcqp/transform.hpp"

namespace qcqp {

void GenSpec::validate() const {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "instance size must be at least 2");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  }
}

namespace instances {
namespace {

// tau * F diag(f) F^T
Matrix scaled_gram(const Matrix& f, const Vector& weights, double tau) {
  return tau * f * weights.asDiagonal() * f.transpose();
}

Vector uniform_vector(Rng& rng, Index n, double lo, double hi) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

RealQcqp standard_problem(Rng& rng, Index n, double eps) {
  RealQcqp p;
  const double tau1 = rng.chi_square1();
  const Matrix f1 = rng.normal_matrix(n, n);
  p.a1 = SymMatrix(tau1 * f1 * f1.transpose() + eps * Matrix::Identity(n, n));
  const double tau0 = rng.chi_square1();
  const Matrix f0 = rng.normal_matrix(n, n);
  p.a0 = SymMatrix(scaled_gram(f0, uniform_vector(rng, n, -1.0, 1.0), tau0));
  p.b0 = rng.normal_vector(n);
  p.b1 = rng.normal_vector(n);
  p.c0 = 0.0;
  const double margin = std::abs(rng.normal());
  p.c1 = p.b1.dot(p.a1.matrix().llt().solve(p.b1)) - margin;
  return p;
}

RealQcqp rank_deficient_problem(Rng& rng, Index n) {
  RealQcqp p;
  const Index r = rank_for(n);
  const double tau1 = rng.chi_square1();
  const Matrix f1 = rng.normal_matrix(n, r);
  p.a1 = SymMatrix(tau1 * f1 * f1.transpose());
  const double tau0 = rng.chi_square1();
  const Matrix f0 = rng.normal_matrix(n, n);
  p.a0 = SymMatrix(scaled_gram(f0, uniform_vector(rng, n, 0.0, 1.0), tau0));
  p.b0 = rng.normal_vector(n);
  p.b1 = rng.normal_vector(n);
  p.c0 = 0.0;
  // c1 < 0 makes x = 0 strictly inside, so the level set is nonempty.
  p.c1 = -std::abs(rng.normal());
  return p;
}

RealQcqp indefinite_problem(Rng& rng, Index n, double eps) {
  RealQcqp p;
  const double tau0 = rng.chi_square1();
  const Matrix f0 = rng.normal_matrix(n, n / 2);
  p.a0 = SymMatrix(tau0 * f0 * f0.transpose() + eps * Matrix::Identity(n, n));
  const double tau1 = rng.chi_square1();
  const Matrix f1 = rng.normal_matrix(n, n);
  Vector w = uniform_vector(rng, n, -1.0, 1.0);
  for (Index i = 0; i < n; ++i) {
    if (std::abs(w(i)) < kIndefiniteFloor) w(i) = std::copysign(kIndefiniteFloor, w(i));
  }
  if (w.minCoeff() > 0.0 || w.maxCoeff() < 0.0) w(n - 1) = -w(n - 1);
  p.a1 = SymMatrix(scaled_gram(f1, w, tau1));
  p.b0 = rng.normal_vector(n);
  p.b1 = rng.normal_vector(n);
  p.c0 = 0.0;
  p.c1 = rng.normal();
  return p;
}

QcqpInstance augmented_instance(Rng& rng, Index n, double eps) {
  RealQcqp p = standard_problem(rng, n, eps);
  const Index rows = linear_rows_for(n);
  LinearEqualities lin{rng.normal_matrix(rows, n), rng.normal_vector(rows)};
  const double margin = std::abs(rng.normal());
  // Pick c1 so that the problem restricted to A2 x = b2 has a nonempty level set.
  p.c1 = 0.0;
  const LinearReduction red = transform::reduce_linear(p, lin, linalg::default_eps_rank(n));
  const RealQcqp& q = red.reduced;
  const double center = q.b1.dot(q.a1.matrix().llt().solve(q.b1));
  p.c1 = center - q.c1 - margin;
  return QcqpInstance::real(ProblemKind::Augmented, std::move(p), std::move(lin));
}

QcqpInstance matrix_instance(Rng& rng, Index n1, double eps) {
  const Index n2 = n1 - 1;
  ComplexQcqp p;
  const double tau1 = rng.chi_square1();
  const CMatrix f1 = rng.complex_normal_matrix(n1, n1);
  p.a1 = HermMatrix(tau1 * f1 * f1.adjoint() + eps * CMatrix::Identity(n1, n1));
  const double tau0 = rng.chi_square1();
  const CMatrix f0 = rng.complex_normal_matrix(n1, n1);
  const Vector w = uniform_vector(rng, n1, -1.0, 1.0);
  p.a0 = HermMatrix(tau0 * f0 * w.cast<Complex>().asDiagonal() * f0.adjoint());
  p.b0 = rng.complex_normal_matrix(n1, n2);
  p.b1 = rng.complex_normal_matrix(n1, n2);
  p.c0 = 0.0;
  const double margin = std::abs(rng.normal());
  const CMatrix solved = p.a1.matrix().llt().solve(p.b1);
  p.c1 = (p.b1.adjoint() * solved).trace().real() - margin;
  return QcqpInstance::matrix(std::move(p));
}

}  // namespace

Index rank_for(Index n) { return n / 2; }

Index linear_rows_for(Index n) { return n / 3; }

QcqpInstance gen(const GenSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  QcqpInstance out;
  switch (spec.kind) {
    case ProblemKind::Standard:
      out = QcqpInstance::real(spec.kind, standard_problem(rng, spec.n, spec.epsilon));
      break;
    case ProblemKind::RankDeficient:
      out = QcqpInstance::real(spec.kind, rank_deficient_problem(rng, spec.n));
      break;
    case ProblemKind::Indefinite:
      out = QcqpInstance::real(spec.kind, indefinite_problem(rng, spec.n, spec.epsilon));
      break;
    case ProblemKind::Augmented:
      out = augmented_instance(rng, spec.n, spec.epsilon);
      break;
    case ProblemKind::MatrixComplex:
      out = matrix_instance(rng, spec.n, spec.epsilon);
      break;
  }
  out.seed = spec.seed;
  return out;
}

}  // namespace instances
}  // namespace qcqp
