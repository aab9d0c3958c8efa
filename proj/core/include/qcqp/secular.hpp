#pragma once

#include <limits>
#include <vector>

#include "qcqp/linalg.hpp"

namespace qcqp {

enum class SecularVariant { Standard, RankDeficient, Indefinite };

/// The scalar equation f(lambda) = c whose admissible root fixes the multiplier.
///
///   Standard:       f = sum b_i^2 / (a_i + lambda)^2
///   RankDeficient:  f = sum_{i<r} b_i^2 / (a_i + lambda)^2
///                       + 2 sum_{i>=r} (b_c,i b_i - lambda b_c,i^2) / a_i
///   Indefinite:     f = sum a_i b_i^2 / (1 + lambda a_i)^2
struct SecularSpec {
  SecularVariant variant = SecularVariant::Standard;
  Vector a;
  Vector b;
  Vector b_c;      // RankDeficient only
  Index rank = 0;  // RankDeficient only
  double c = 0.0;

  static SecularSpec standard(Vector a, Vector b, double c);
  static SecularSpec rank_deficient(Vector a, Vector b, Vector b_c, Index rank, double c);
  static SecularSpec indefinite(Vector a, Vector b, double c);

  Index size() const { return a.size(); }
  void validate() const;
};

/// Open interval allowed by the second-order condition.
struct AdmissibleInterval {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();

  bool contains(double lambda) const { return lambda > lower && lambda < upper; }
};

enum class PoleSide { Lower, Upper };

/// Degenerate case where every numerator at the blocking pole vanishes and
/// the root is pushed onto the pole itself.
struct HardCaseInfo {
  bool is_hard = false;
  PoleSide side = PoleSide::Lower;
  std::vector<Index> blocking;
  double f_limit = 0.0;
  double lambda_pinned = std::numeric_limits<double>::quiet_NaN();
};

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

struct BisectionResult {
  double lambda = 0.0;
  int iterations = 0;
};

struct SecularOptions {
  double tol_lambda = 1e-13;
  double tol_f = 1e-12;
  double tol_b = 1e-12;  // relative to max |b_i|
  int max_iter = 200;
};

struct SecularSolution {
  double lambda = 0.0;
  Vector y;
  HardCaseInfo hard;
  int iterations = 0;
};

namespace secular {

double eval_f(const SecularSpec& spec, double lambda);
double eval_df(const SecularSpec& spec, double lambda);

AdmissibleInterval admissible_interval(const SecularSpec& spec);

/// rel * max|b_i|, floored at 1e-300.
double default_tol_b(const SecularSpec& spec, double rel = 1e-12);

HardCaseInfo detect_hard_case(const SecularSpec& spec, double tol_b);

Bracket bracket_root(const SecularSpec& spec, const AdmissibleInterval& interval, double c);

BisectionResult bisect(const SecularSpec& spec, double lo, double hi, double c,
                       double tol_lambda, double tol_f, int max_iter);

Vector primal_from_lambda(const SecularSpec& spec, double lambda, const HardCaseInfo& hard);

/// Full stage-2 pipeline: hard-case test, bracketing, bisection, primal recovery.
SecularSolution solve(const SecularSpec& spec, const SecularOptions& options = {});

/// Decoupled objective and constraint residual for the variant's problem.
double objective(const SecularSpec& spec, const Vector& y);
double constraint(const SecularSpec& spec, const Vector& y);

}  // namespace secular
}  // namespace qcqp
