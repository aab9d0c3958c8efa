#include "qcqp/rng.hpp"

#include <cmath>
#include <numbers>

namespace qcqp {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return z;
  }
  const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

double Rng::chi_square1() {
  const double z = normal();
  return z * z;
}

Vector Rng::normal_vector(Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal();
  return v;
}

Matrix Rng::normal_matrix(Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = normal();
  }
  return m;
}

CMatrix Rng::complex_normal_matrix(Index rows, Index cols) {
  const double s = std::sqrt(0.5);
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const double re = normal();
      const double im = normal();
      m(i, j) = Complex(s * re, s * im);
    }
  }
  return m;
}

Vector Rng::unit_vector(Index n) {
  Vector v = normal_vector(n);
  double norm = v.norm();
  while (!(norm > 0.0)) {
    v = normal_vector(n);
    norm = v.norm();
  }
  return v / norm;
}

}  // namespace qcqp
