#include "qcqp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qcqp/error.hpp"
#include "qcqp/transform.hpp"

namespace qcqp {

double SolveOptions::eps_rank_for(Index n) const {
  return eps_rank.value_or(linalg::default_eps_rank(n));
}

SecularOptions SolveOptions::secular() const {
  SecularOptions out;
  out.tol_lambda = tol_lambda;
  out.tol_f = tol_f;
  out.tol_b = tol_b;
  out.max_iter = max_iter;
  return out;
}

void SolveOptions::validate() const {
  const bool positive = tol_lambda > 0.0 && tol_f > 0.0 && tol_b > 0.0 && max_iter > 0 &&
                        (!eps_rank || *eps_rank > 0.0);
  if (!positive) throw Error(ErrorCode::InvalidArgument, "solver tolerances must be positive");
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::TrivialC0: return "trivial_c0";
    case SolveStatus::HardCase: return "hard_case";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

namespace solver {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_kind(const QcqpInstance& instance, ProblemKind kind) {
  instance.validate();
  if (instance.kind != kind) {
    throw Error(ErrorCode::InvalidArgument, "expected a '" + std::string(to_string(kind)) +
                                                "' instance, got '" +
                                                std::string(to_string(instance.kind)) + "'");
  }
}

// Result of stage 2 on a decoupled problem.
struct DecoupledSolve {
  Vector y;
  double lambda = 0.0;
  SolveStatus status = SolveStatus::Optimal;
  int iterations = 0;
  std::string diagnostic;
};

SolveStatus status_from(const SecularSolution& s) {
  return s.hard.is_hard ? SolveStatus::HardCase : SolveStatus::Optimal;
}

DecoupledSolve solve_pd_constraint(const DecoupledProblem& dp, double c1,
                                   const SolveOptions& opts) {
  DecoupledSolve out;
  if (dp.c <= transform::radius_tolerance(c1)) {
    // The constraint set is the single point y = 0.
    out.y = Vector::Zero(dp.size());
    out.lambda = -dp.a.minCoeff();
    out.status = SolveStatus::TrivialC0;
    return out;
  }
  const SecularSolution s = secular::solve(SecularSpec::standard(dp.a, dp.b, dp.c), opts.secular());
  out.y = s.y;
  out.lambda = s.lambda;
  out.status = status_from(s);
  out.iterations = s.iterations;
  return out;
}

Solution finish_real(const RealQcqp& problem, Vector x, const DecoupledSolve& d) {
  Solution sol;
  sol.objective = problem.objective(x);
  sol.constraint_residual = std::abs(problem.constraint(x));
  sol.x = std::move(x);
  sol.lambda_star = d.lambda;
  sol.status = d.status;
  sol.iterations = d.iterations;
  sol.diagnostic = d.diagnostic;
  return sol;
}

Solution without_minimizer(Index n, SolveStatus status, std::string diagnostic) {
  Solution sol;
  sol.x = Vector(Vector::Constant(n, std::numeric_limits<double>::quiet_NaN()));
  sol.lambda_star = std::numeric_limits<double>::quiet_NaN();
  sol.objective = status == SolveStatus::Unbounded ? -std::numeric_limits<double>::infinity()
                                                   : std::numeric_limits<double>::quiet_NaN();
  sol.constraint_residual = std::numeric_limits<double>::quiet_NaN();
  sol.status = status;
  sol.diagnostic = std::move(diagnostic);
  return sol;
}

Solution standard_impl(const RealQcqp& problem, const SolveOptions& opts, SolveTimings& t) {
  opts.validate();
  auto start = Clock::now();
  const double eps = opts.eps_rank_for(problem.size());
  const SimDiag sd = transform::simdiag_pd(problem.a0, problem.a1, eps);
  const DecoupledProblem dp = transform::decouple(problem, sd);
  t.transform_seconds += seconds_since(start);

  start = Clock::now();
  const DecoupledSolve d = solve_pd_constraint(dp, problem.c1, opts);
  t.secular_seconds += seconds_since(start);
  return finish_real(problem, transform::recover_x(d.y, dp), d);
}

Solution rank_deficient_impl(const RealQcqp& problem, const SolveOptions& opts,
                             SolveTimings& t) {
  opts.validate();
  auto start = Clock::now();
  const Index n = problem.size();
  const double eps = opts.eps_rank_for(n);
  const SimDiag sd = transform::simdiag_psd(problem.a0, problem.a1, eps);
  const DecoupledProblem dp = transform::decouple(problem, sd);
  t.transform_seconds += seconds_since(start);
  start = Clock::now();

  const Index r = dp.rank;
  const Vector& a = dp.a;
  const Vector& b = dp.b;
  const Vector& bc = dp.b_c;
  const double a_scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double tol =
      std::max(opts.tol_b * std::max(b.cwiseAbs().maxCoeff(), bc.cwiseAbs().maxCoeff()), 1e-300);
  const double head_min = a.head(r).minCoeff();

  // Coordinates beyond the rank whose curvature vanishes.
  std::vector<Index> pinning;
  std::vector<double> candidates;
  for (Index i = r; i < n; ++i) {
    if (a(i) > eps * a_scale) continue;
    if (std::abs(bc(i)) <= tol) {
      if (std::abs(b(i)) > tol) {
        return without_minimizer(n, SolveStatus::Unbounded,
                                 "objective is linear in a free direction (index " +
                                     std::to_string(i) + ")");
      }
      continue;
    }
    pinning.push_back(i);
    candidates.push_back(b(i) / bc(i));
  }

  DecoupledSolve d;
  if (!pinning.empty()) {
    const double lambda = candidates.front();
    for (double cand : candidates) {
      if (std::abs(cand - lambda) > 1e-8 * (1.0 + std::abs(lambda))) {
        return without_minimizer(n, SolveStatus::Infeasible,
                                 "stationarity pins inconsistent multipliers " +
                                     std::to_string(lambda) + " and " + std::to_string(cand));
      }
    }
    if (lambda + head_min < -1e-12 * a_scale) {
      return without_minimizer(n, SolveStatus::Infeasible,
                               "pinned multiplier " + std::to_string(lambda) +
                                   " violates the second-order condition");
    }
    Vector y = Vector::Zero(n);
    for (Index i = 0; i < r; ++i) {
      const double g = a(i) + lambda;
      if (std::abs(g) <= 1e-12 * a_scale) {
        if (std::abs(b(i)) > tol) {
          return without_minimizer(n, SolveStatus::Infeasible,
                                   "pinned multiplier sits on a pole with nonzero numerator");
        }
        continue;
      }
      y(i) = b(i) / g;
    }
    for (Index i = r; i < n; ++i) {
      if (a(i) > eps * a_scale) y(i) = (b(i) - lambda * bc(i)) / a(i);
    }
    // The first pinning coordinate is otherwise free; it absorbs the residual.
    const Index j = pinning.front();
    y(j) = 0.0;
    y(j) = -dp.constraint(y) / (2.0 * bc(j));
    d.y = std::move(y);
    d.lambda = lambda;
    d.diagnostic = "multiplier pinned by zero-curvature directions";
  } else {
    const bool linear_tail = (bc.tail(n - r).array().abs() > tol).any();
    if (!linear_tail && dp.c < -transform::radius_tolerance(problem.c1)) {
      return without_minimizer(n, SolveStatus::Infeasible,
                               "constraint set is empty (decoupled radius " +
                                   std::to_string(dp.c) + ")");
    }
    if (!linear_tail && dp.c <= transform::radius_tolerance(problem.c1)) {
      Vector y = Vector::Zero(n);
      for (Index i = r; i < n; ++i) {
        if (a(i) > eps * a_scale) y(i) = b(i) / a(i);
      }
      d.y = std::move(y);
      d.lambda = -head_min;
      d.status = SolveStatus::TrivialC0;
    } else {
      const SecularSolution s = secular::solve(
          SecularSpec::rank_deficient(a, b, bc, r, dp.c), opts.secular());
      d.y = s.y;
      d.lambda = s.lambda;
      d.status = status_from(s);
      d.iterations = s.iterations;
    }
  }
  t.secular_seconds += seconds_since(start);
  return finish_real(problem, transform::recover_x(d.y, dp), d);
}

Solution indefinite_impl(const RealQcqp& problem, const SolveOptions& opts, SolveTimings& t) {
  opts.validate();
  auto start = Clock::now();
  const SimDiag sd =
      transform::simdiag_indefinite(problem.a0, problem.a1, opts.eps_rank_for(problem.size()));
  const DecoupledProblem dp = transform::decouple(problem, sd);
  t.transform_seconds += seconds_since(start);

  start = Clock::now();
  const SecularSolution s =
      secular::solve(SecularSpec::indefinite(dp.a, dp.b, dp.c), opts.secular());
  DecoupledSolve d;
  d.y = s.y;
  d.lambda = s.lambda;
  d.status = status_from(s);
  d.iterations = s.iterations;
  t.secular_seconds += seconds_since(start);
  return finish_real(problem, transform::recover_x(d.y, dp), d);
}

struct MatrixStage {
  CMatrix y;
  double lambda = 0.0;
  SolveStatus status = SolveStatus::Optimal;
  int iterations = 0;
};

// Aggregate the rows of B, solve the scalar equation, then
// give every row of Y the phase of the matching row of B.
MatrixStage solve_decoupled_matrix(const DecoupledMatrixProblem& dp, double zero_radius,
                                   const SolveOptions& opts) {
  const Index n1 = dp.a.size();
  const Index n2 = dp.b.cols();
  MatrixStage out;
  if (dp.c <= zero_radius) {
    out.y = CMatrix::Zero(n1, n2);
    out.lambda = -dp.a.minCoeff();
    out.status = SolveStatus::TrivialC0;
    return out;
  }
  const Vector row_norms = dp.b.rowwise().norm();
  const SecularSolution s =
      secular::solve(SecularSpec::standard(dp.a, row_norms, dp.c), opts.secular());
  out.y = CMatrix::Zero(n1, n2);
  for (Index j = 0; j < n1; ++j) {
    if (s.y(j) == 0.0) continue;
    if (row_norms(j) > 0.0) {
      out.y.row(j) = dp.b.row(j) * (s.y(j) / row_norms(j));
    } else {
      out.y(j, 0) = s.y(j);
    }
  }
  out.lambda = s.lambda;
  out.status = status_from(s);
  out.iterations = s.iterations;
  return out;
}

Solution finish_matrix(const ComplexQcqp& problem, CMatrix x, const MatrixStage& m) {
  Solution sol;
  sol.objective = problem.objective(x);
  sol.constraint_residual = std::abs(problem.constraint(x));
  sol.x = std::move(x);
  sol.lambda_star = m.lambda;
  sol.status = m.status;
  sol.iterations = m.iterations;
  return sol;
}

Solution matrix_impl(const ComplexQcqp& problem, const SolveOptions& opts, SolveTimings& t) {
  opts.validate();
  auto start = Clock::now();
  const HermSimDiag sd =
      transform::simdiag_pd(problem.a0, problem.a1, opts.eps_rank_for(problem.rows()));
  const DecoupledMatrixProblem dp = transform::decouple(problem, sd);
  t.transform_seconds += seconds_since(start);

  start = Clock::now();
  const MatrixStage m = solve_decoupled_matrix(dp, transform::radius_tolerance(problem.c1), opts);
  t.secular_seconds += seconds_since(start);
  return finish_matrix(problem, transform::recover_x(m.y, dp), m);
}

Solution augmented_impl(const QcqpInstance& instance, const SolveOptions& opts,
                        SolveTimings& t) {
  auto start = Clock::now();
  const LinearReduction reduction =
      transform::reduce_linear(instance, opts.eps_rank_for(instance.n()));
  t.transform_seconds += seconds_since(start);
  Solution reduced = standard_impl(reduction.reduced, opts, t);
  const RealQcqp& problem = instance.real_problem();
  Vector x = reduction.embed(reduced.vector());
  reduced.objective = problem.objective(x);
  reduced.constraint_residual = std::abs(problem.constraint(x));
  reduced.x = std::move(x);
  return reduced;
}

Solution dispatch(const QcqpInstance& instance, const SolveOptions& opts, SolveTimings& t) {
  instance.validate();
  switch (instance.kind) {
    case ProblemKind::Standard:
      return standard_impl(instance.real_problem(), opts, t);
    case ProblemKind::RankDeficient:
      return rank_deficient_impl(instance.real_problem(), opts, t);
    case ProblemKind::Indefinite:
      return indefinite_impl(instance.real_problem(), opts, t);
    case ProblemKind::Augmented:
      return augmented_impl(instance, opts, t);
    case ProblemKind::MatrixComplex:
      return matrix_impl(instance.complex_problem(), opts, t);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown problem kind");
}

double min_eig(const Matrix& m) { return linalg::sym_evd(SymMatrix(m)).eigenvalues(0); }

}  // namespace

Solution solve_standard(const QcqpInstance& instance, const SolveOptions& opts) {
  require_kind(instance, ProblemKind::Standard);
  SolveTimings t;
  return standard_impl(instance.real_problem(), opts, t);
}

Solution solve_rank_deficient(const QcqpInstance& instance, const SolveOptions& opts) {
  require_kind(instance, ProblemKind::RankDeficient);
  SolveTimings t;
  return rank_deficient_impl(instance.real_problem(), opts, t);
}

Solution solve_indefinite(const QcqpInstance& instance, const SolveOptions& opts) {
  require_kind(instance, ProblemKind::Indefinite);
  SolveTimings t;
  return indefinite_impl(instance.real_problem(), opts, t);
}

Solution solve_augmented(const QcqpInstance& instance, const SolveOptions& opts) {
  require_kind(instance, ProblemKind::Augmented);
  SolveTimings t;
  return augmented_impl(instance, opts, t);
}

Solution solve_matrix(const QcqpInstance& instance, const SolveOptions& opts) {
  require_kind(instance, ProblemKind::MatrixComplex);
  SolveTimings t;
  return matrix_impl(instance.complex_problem(), opts, t);
}

QcqpInstance frobenius_instance(const CMatrix& f, const CMatrix& g, double c) {
  if (g.cols() < 1 || f.rows() != g.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "F and G need the same number of rows");
  }
  ComplexQcqp p;
  const Index n1 = g.cols();
  p.a0 = HermMatrix(g.adjoint() * g);
  p.b0 = -g.adjoint() * f;
  p.c0 = f.squaredNorm();
  p.a1 = HermMatrix::identity(n1);
  p.b1 = CMatrix::Zero(n1, f.cols());
  p.c1 = -c;
  return QcqpInstance::matrix(std::move(p));
}

Solution solve_frobenius_special(const CMatrix& f, const CMatrix& g, double c,
                                 const SolveOptions& opts) {
  opts.validate();
  if (g.cols() < 1 || f.rows() != g.rows() || f.cols() < 1) {
    throw Error(ErrorCode::DimensionMismatch, "F and G need the same number of rows");
  }
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::InvalidArgument, "radius c must be positive");
  }
  if (!linalg::all_finite(f) || !linalg::all_finite(g)) {
    throw Error(ErrorCode::NonFinite, "F or G contains NaN or Inf");
  }
  const Index n1 = g.cols();
  const Eigen::BDCSVD<CMatrix> svd(g, Eigen::ComputeFullV);
  const Vector& sigma = svd.singularValues();  // descending, min(M, N1) entries

  // Ascending a = sigma^2 padded with zeros; T = V with columns reordered to match.
  DecoupledMatrixProblem dp;
  dp.a = Vector::Zero(n1);
  CMatrix v(n1, n1);
  const Index k = sigma.size();
  for (Index j = 0; j < n1; ++j) {
    const Index src = n1 - 1 - j;
    v.col(j) = svd.matrixV().col(src);
    dp.a(j) = src < k ? sigma(src) * sigma(src) : 0.0;
  }
  dp.t_inv = v.adjoint();
  dp.b = dp.t_inv * (g.adjoint() * f);
  dp.c = c;
  dp.shift = CMatrix::Zero(n1, f.cols());
  dp.constant = f.squaredNorm();

  const MatrixStage m = solve_decoupled_matrix(dp, 0.0, opts);
  CMatrix x = dp.recover(m.y);
  Solution sol;
  sol.objective = (f - g * x).squaredNorm();
  sol.constraint_residual = std::abs(x.squaredNorm() - c);
  sol.x = std::move(x);
  sol.lambda_star = m.lambda;
  sol.status = m.status;
  sol.iterations = m.iterations;
  return sol;
}

Solution solve(const QcqpInstance& instance, const SolveOptions& opts) {
  SolveTimings t;
  return dispatch(instance, opts, t);
}

SolveReport solve_with_report(const QcqpInstance& instance, const SolveOptions& opts) {
  SolveReport report;
  const auto start = Clock::now();
  report.solution = dispatch(instance, opts, report.timings);
  report.timings.total_seconds = seconds_since(start);
  if (opts.report_kkt && report.solution.has_minimizer()) {
    report.kkt = kkt_residuals(instance, report.solution, opts.eps_rank);
  }
  return report;
}

KktResiduals kkt_residuals(const QcqpInstance& instance, const Solution& solution,
                           std::optional<double> eps_rank) {
  const double lambda = solution.lambda_star;
  KktResiduals out;
  if (instance.is_matrix()) {
    const ComplexQcqp& p = instance.complex_problem();
    const CMatrix& x = solution.matrix();
    const CMatrix hessian = p.a0.matrix() + lambda * p.a1.matrix();
    out.stationarity = (hessian * x + p.b0 + lambda * p.b1).norm();
    out.feasibility = std::abs(p.constraint(x));
    out.second_order_min_eig = linalg::herm_evd(HermMatrix(hessian)).eigenvalues(0);
    return out;
  }

  const RealQcqp& p = instance.real_problem();
  const Vector& x = solution.vector();
  const Matrix hessian = p.a0.matrix() + lambda * p.a1.matrix();
  const Vector gradient = hessian * x + p.b0 + lambda * p.b1;
  out.feasibility = std::abs(p.constraint(x));
  if (instance.linear && instance.linear->rows() > 0) {
    const LinearEqualities& lin = *instance.linear;
    const Matrix basis = linalg::null_space_basis(
        lin.a2, eps_rank.value_or(linalg::default_eps_rank(p.size())));
    out.stationarity = (basis.transpose() * gradient).norm();
    out.second_order_min_eig = min_eig(basis.transpose() * hessian * basis);
    out.linear_residual = (lin.a2 * x - lin.b2).cwiseAbs().maxCoeff();
  } else {
    out.stationarity = gradient.norm();
    out.second_order_min_eig = min_eig(hessian);
  }
  return out;
}

double kkt_scale(const QcqpInstance& instance, double lambda) {
  if (instance.is_matrix()) {
    const ComplexQcqp& p = instance.complex_problem();
    return p.a0.matrix().norm() + std::abs(lambda) * p.a1.matrix().norm();
  }
  const RealQcqp& p = instance.real_problem();
  return p.a0.matrix().norm() + std::abs(lambda) * p.a1.matrix().norm();
}

double constraint_scale(const QcqpInstance& instance) {
  if (instance.is_matrix()) {
    const ComplexQcqp& p = instance.complex_problem();
    return std::max(1.0, std::abs(p.c1) + p.b1.norm() + p.a1.matrix().norm());
  }
  const RealQcqp& p = instance.real_problem();
  return std::max(1.0, std::abs(p.c1) + p.b1.norm() + p.a1.matrix().norm());
}

}  // namespace solver
}  // namespace qcqp
