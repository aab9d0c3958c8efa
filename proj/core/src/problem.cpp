#include "qcqp/problem.hpp"

#include <cmath>
#include <string>

#include "qcqp/error.hpp"

namespace qcqp {

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Standard: return "standard";
    case ProblemKind::RankDeficient: return "rank_deficient";
    case ProblemKind::Indefinite: return "indefinite";
    case ProblemKind::Augmented: return "augmented";
    case ProblemKind::MatrixComplex: return "matrix";
  }
  return "unknown";
}

std::optional<ProblemKind> parse_kind(std::string_view name) {
  if (name == "standard") return ProblemKind::Standard;
  if (name == "rank_deficient" || name == "rankdef") return ProblemKind::RankDeficient;
  if (name == "indefinite") return ProblemKind::Indefinite;
  if (name == "augmented") return ProblemKind::Augmented;
  if (name == "matrix" || name == "matrix_complex") return ProblemKind::MatrixComplex;
  return std::nullopt;
}

double RealQcqp::objective(const Vector& x) const {
  return x.dot(a0.matrix() * x) + 2.0 * b0.dot(x) + c0;
}

double RealQcqp::constraint(const Vector& x) const {
  return x.dot(a1.matrix() * x) + 2.0 * b1.dot(x) + c1;
}

void RealQcqp::validate() const {
  const Index n = a0.size();
  if (n < 1) throw Error(ErrorCode::DimensionMismatch, "empty problem");
  if (a1.size() != n || b0.size() != n || b1.size() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "A0 is " + std::to_string(n) + "x" + std::to_string(n) + " but A1/b0/b1 disagree");
  }
  if (!a0.matrix().allFinite() || !a1.matrix().allFinite() || !b0.allFinite() ||
      !b1.allFinite() || !std::isfinite(c0) || !std::isfinite(c1)) {
    throw Error(ErrorCode::NonFinite, "problem data contains NaN or Inf");
  }
}

double ComplexQcqp::objective(const CMatrix& x) const {
  return (x.adjoint() * a0.matrix() * x).trace().real() +
         2.0 * (b0.adjoint() * x).trace().real() + c0;
}

double ComplexQcqp::constraint(const CMatrix& x) const {
  return (x.adjoint() * a1.matrix() * x).trace().real() +
         2.0 * (b1.adjoint() * x).trace().real() + c1;
}

void ComplexQcqp::validate() const {
  const Index n1 = a0.size();
  if (n1 < 1 || b0.cols() < 1) throw Error(ErrorCode::DimensionMismatch, "empty problem");
  if (a1.size() != n1 || b0.rows() != n1 || b1.rows() != n1 || b1.cols() != b0.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix problem blocks have inconsistent shapes");
  }
  if (!linalg::all_finite(a0.matrix()) || !linalg::all_finite(a1.matrix()) ||
      !linalg::all_finite(b0) || !linalg::all_finite(b1) || !std::isfinite(c0) ||
      !std::isfinite(c1)) {
    throw Error(ErrorCode::NonFinite, "problem data contains NaN or Inf");
  }
}

QcqpInstance QcqpInstance::real(ProblemKind kind, RealQcqp problem,
                                std::optional<LinearEqualities> linear) {
  if (kind == ProblemKind::MatrixComplex) {
    throw Error(ErrorCode::InvalidArgument, "matrix kind needs complex data");
  }
  QcqpInstance out;
  out.kind = kind;
  out.data = std::move(problem);
  out.linear = std::move(linear);
  return out;
}

QcqpInstance QcqpInstance::matrix(ComplexQcqp problem) {
  QcqpInstance out;
  out.kind = ProblemKind::MatrixComplex;
  out.data = std::move(problem);
  return out;
}

const RealQcqp& QcqpInstance::real_problem() const {
  if (const auto* p = std::get_if<RealQcqp>(&data)) return *p;
  throw Error(ErrorCode::InvalidArgument, "instance holds complex matrix data");
}

const ComplexQcqp& QcqpInstance::complex_problem() const {
  if (const auto* p = std::get_if<ComplexQcqp>(&data)) return *p;
  throw Error(ErrorCode::InvalidArgument, "instance holds real vector data");
}

Index QcqpInstance::n() const {
  return is_matrix() ? complex_problem().rows() : real_problem().size();
}

Index QcqpInstance::n2() const { return is_matrix() ? complex_problem().cols() : 1; }

void QcqpInstance::validate() const {
  if ((kind == ProblemKind::MatrixComplex) != is_matrix()) {
    throw Error(ErrorCode::InvalidArgument,
                "kind '" + std::string(to_string(kind)) + "' does not match the stored data");
  }
  if (is_matrix()) {
    complex_problem().validate();
  } else {
    real_problem().validate();
  }
  if (kind == ProblemKind::Augmented) {
    if (!linear) throw Error(ErrorCode::InvalidArgument, "augmented instance without A2/b2");
    if (linear->a2.cols() != n() || linear->b2.size() != linear->a2.rows()) {
      throw Error(ErrorCode::DimensionMismatch, "A2/b2 shapes do not match the variable");
    }
  } else if (linear) {
    throw Error(ErrorCode::InvalidArgument,
                "linear equalities are only allowed on the augmented kind");
  }
}

}  // namespace qcqp
