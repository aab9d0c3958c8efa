#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "qcqp/linalg.hpp"
#include "qcqp/problem.hpp"
#include "qcqp/secular.hpp"

namespace qcqp {

struct SolveOptions {
  double tol_lambda = 1e-13;
  double tol_f = 1e-12;
  double tol_b = 1e-12;  // relative to max |b_i|
  std::optional<double> eps_rank;  // defaults to linalg::default_eps_rank(n)
  int max_iter = 200;
  bool report_kkt = true;

  double eps_rank_for(Index n) const;
  SecularOptions secular() const;
  void validate() const;
};

enum class SolveStatus { Optimal, TrivialC0, HardCase, Infeasible, Unbounded };

std::string_view to_string(SolveStatus status);

struct Solution {
  std::variant<Vector, CMatrix> x;
  double lambda_star = 0.0;
  double objective = 0.0;
  double constraint_residual = 0.0;
  SolveStatus status = SolveStatus::Optimal;
  int iterations = 0;
  std::string diagnostic;

  bool is_matrix() const { return std::holds_alternative<CMatrix>(x); }
  const Vector& vector() const { return std::get<Vector>(x); }
  const CMatrix& matrix() const { return std::get<CMatrix>(x); }
  /// Optimal, TrivialC0 and HardCase all carry a feasible global minimizer.
  bool has_minimizer() const {
    return status == SolveStatus::Optimal || status == SolveStatus::TrivialC0 ||
           status == SolveStatus::HardCase;
  }
};

struct KktResiduals {
  double stationarity = 0.0;
  double feasibility = 0.0;
  double second_order_min_eig = 0.0;
  double linear_residual = 0.0;  // max |A2 x - b2|, augmented kind only
};

struct SolveTimings {
  double transform_seconds = 0.0;
  double secular_seconds = 0.0;
  double total_seconds = 0.0;
};

struct SolveReport {
  Solution solution;
  std::optional<KktResiduals> kkt;
  SolveTimings timings;
};

namespace solver {

Solution solve_standard(const QcqpInstance& instance, const SolveOptions& opts = {});
Solution solve_rank_deficient(const QcqpInstance& instance, const SolveOptions& opts = {});
Solution solve_indefinite(const QcqpInstance& instance, const SolveOptions& opts = {});
Solution solve_augmented(const QcqpInstance& instance, const SolveOptions& opts = {});
Solution solve_matrix(const QcqpInstance& instance, const SolveOptions& opts = {});

/// min ||F - G X||_F^2  s.t.  ||X||_F^2 = c, through the SVD of G.
Solution solve_frobenius_special(const CMatrix& f, const CMatrix& g, double c,
                                 const SolveOptions& opts = {});

/// The matrix instance equivalent to the Frobenius problem above.
QcqpInstance frobenius_instance(const CMatrix& f, const CMatrix& g, double c);

/// Dispatch on instance.kind.
Solution solve(const QcqpInstance& instance, const SolveOptions& opts = {});

/// solve() plus timings and, if requested, KKT residuals.
SolveReport solve_with_report(const QcqpInstance& instance, const SolveOptions& opts = {});

/// Lagrangian residuals of a reported solution. For the augmented kind the
/// stationarity and curvature are measured on the null space of A2.
KktResiduals kkt_residuals(const QcqpInstance& instance, const Solution& solution,
                           std::optional<double> eps_rank = std::nullopt);

/// ||A0||_F + |lambda| ||A1||_F, the scale used for curvature and gradient checks.
double kkt_scale(const QcqpInstance& instance, double lambda);

/// max(1, |c1| + ||b1|| + ||A1||_F), the scale of the constraint validity bar.
double constraint_scale(const QcqpInstance& instance);

}  // namespace solver
}  // namespace qcqp
