#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>

#include "qcqp/linalg.hpp"

namespace qcqp {

enum class ProblemKind { Standard, RankDeficient, Indefinite, Augmented, MatrixComplex };

std::string_view to_string(ProblemKind kind);
std::optional<ProblemKind> parse_kind(std::string_view name);

/// minimize x'A0x + 2b0'x + c0  subject to  x'A1x + 2b1'x + c1 = 0, x real.
struct RealQcqp {
  SymMatrix a0;
  Vector b0;
  double c0 = 0.0;
  SymMatrix a1;
  Vector b1;
  double c1 = 0.0;

  Index size() const { return a0.size(); }
  double objective(const Vector& x) const;
  double constraint(const Vector& x) const;
  void validate() const;
};

/// Matrix variable X in C^{n1 x n2}:
///   minimize Tr(X^H A0 X) + 2 Re Tr(B0^H X) + c0
///   subject to Tr(X^H A1 X) + 2 Re Tr(B1^H X) + c1 = 0.
struct ComplexQcqp {
  HermMatrix a0;
  CMatrix b0;
  double c0 = 0.0;
  HermMatrix a1;
  CMatrix b1;
  double c1 = 0.0;

  Index rows() const { return a0.size(); }
  Index cols() const { return b0.cols(); }
  double objective(const CMatrix& x) const;
  double constraint(const CMatrix& x) const;
  void validate() const;
};

/// Extra affine equalities A2 x = b2 (A2 is p x N).
struct LinearEqualities {
  Matrix a2;
  Vector b2;

  Index rows() const { return a2.rows(); }
};

struct QcqpInstance {
  ProblemKind kind = ProblemKind::Standard;
  std::variant<RealQcqp, ComplexQcqp> data;
  std::optional<LinearEqualities> linear;
  std::optional<std::uint64_t> seed;

  static QcqpInstance real(ProblemKind kind, RealQcqp problem,
                           std::optional<LinearEqualities> linear = std::nullopt);
  static QcqpInstance matrix(ComplexQcqp problem);

  bool is_matrix() const { return std::holds_alternative<ComplexQcqp>(data); }
  const RealQcqp& real_problem() const;
  const ComplexQcqp& complex_problem() const;

  /// N for vector kinds, N1 for the matrix kind.
  Index n() const;
  /// N2 for the matrix kind, 1 otherwise.
  Index n2() const;

  /// Dimension consistency; definiteness is checked by the solvers.
  void validate() const;
};

}  // namespace qcqp
