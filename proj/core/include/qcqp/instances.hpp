#pragma once

#include <cstdint>

#include "qcqp/problem.hpp"

namespace qcqp {

struct GenSpec {
  ProblemKind kind = ProblemKind::Standard;
  Index n = 2;  // N, or N1 for the matrix kind (N2 = N1 - 1)
  std::uint64_t seed = 0;
  double epsilon = 0.1;

  void validate() const;
};

namespace instances {

/// Rank of A1 for the rank-deficient kind.
Index rank_for(Index n);
/// Number of linear equalities for the augmented kind.
Index linear_rows_for(Index n);

/// Smallest |f1| entry allowed in the indefinite constraint matrix.
inline constexpr double kIndefiniteFloor = 1e-4;

/// Random instance of the requested kind. Identical specs give bit-identical data.
QcqpInstance gen(const GenSpec& spec);

}  // namespace instances
}  // namespace qcqp
