#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "qcqp/linalg.hpp"

namespace qcqp {

/// Seeded generator built on std::mt19937_64, whose output sequence is fixed
/// by the C++ standard. Uniforms take the top 53 bits; normals come from the
/// Box-Muller transform, so streams are reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  /// Chi-square with one degree of freedom.
  double chi_square1();

  Vector normal_vector(Index n);
  Matrix normal_matrix(Index rows, Index cols);
  /// Complex entries with independent N(0, 1/2) real and imaginary parts.
  CMatrix complex_normal_matrix(Index rows, Index cols);
  /// Uniform direction on the unit sphere in R^n.
  Vector unit_vector(Index n);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace qcqp
