#include "qcqp/oracle.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qcqp/error.hpp"
#include "qcqp/rng.hpp"
#include "qcqp/transform.hpp"

namespace qcqp::oracle {
namespace {

constexpr int kGoldenIterations = 200;
constexpr int kBisectIterations = 200;
constexpr double kEps = std::numeric_limits<double>::epsilon();

bool is_indefinite(const SecularSpec& spec) { return spec.variant == SecularVariant::Indefinite; }

Index pole_count(const SecularSpec& spec) {
  return spec.variant == SecularVariant::RankDeficient ? spec.rank : spec.size();
}

double pole_of(const SecularSpec& spec, Index i) {
  return is_indefinite(spec) ? -1.0 / spec.a(i) : -spec.a(i);
}

bool same_pole(double p, double q) { return std::abs(p - q) <= 1e-12 * std::max(1.0, std::abs(p)); }

// Stationary point for a multiplier away from every active pole.
Vector stationary_y(const SecularSpec& spec, double lambda) {
  const Index n = spec.size();
  const Index m = pole_count(spec);
  Vector y = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    if (i >= m) {
      const double num = spec.b(i) - lambda * spec.b_c(i);
      if (num != 0.0) y(i) = num / spec.a(i);
    } else if (spec.b(i) != 0.0) {
      const double g = is_indefinite(spec) ? 1.0 + lambda * spec.a(i) : spec.a(i) + lambda;
      y(i) = spec.b(i) / g;
    }
  }
  return y;
}

bool second_order_ok(const SecularSpec& spec, double lambda) {
  const Index m = pole_count(spec);
  for (Index i = 0; i < m; ++i) {
    const double g = is_indefinite(spec) ? 1.0 + lambda * spec.a(i) : spec.a(i) + lambda;
    if (g < -1e-9 * std::max(1.0, std::abs(lambda) * std::abs(spec.a(i)))) return false;
  }
  return true;
}

KktCandidate make_candidate(const SecularSpec& spec, double lambda, Vector y, bool at_pole) {
  KktCandidate out;
  out.lambda = lambda;
  out.objective = secular::objective(spec, y);
  out.y = std::move(y);
  out.in_second_order_region = second_order_ok(spec, lambda);
  out.at_pole = at_pole;
  return out;
}

template <typename F>
double golden_min(const F& f, double lo, double hi) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int k = 0; k < kGoldenIterations && hi - lo > 0.0; ++k) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

// Root of g between `pos` (g > 0) and `neg` (g <= 0), in either order.
template <typename G>
double bisect_sign(const G& g, double pos, double neg) {
  for (int k = 0; k < kBisectIterations; ++k) {
    const double mid = 0.5 * (pos + neg);
    if (mid == pos || mid == neg) break;
    (g(mid) > 0.0 ? pos : neg) = mid;
  }
  return std::abs(g(pos)) < std::abs(g(neg)) ? pos : neg;
}

// Scan grid for one interval: Chebyshev nodes plus log-spaced offsets from
// each finite end, where roots near poles hide.
std::vector<double> scan_grid(double lo, double hi, bool lo_pole, bool hi_pole) {
  const double width = hi - lo;
  std::vector<double> pts;
  constexpr int kCheb = 400;
  for (int k = 0; k < kCheb; ++k) {
    const double t = std::cos(std::numbers::pi * (k + 0.5) / kCheb);
    pts.push_back(lo + 0.5 * width * (1.0 + t));
  }
  for (int k = 0; k <= 16 * 30; ++k) {
    const double off = width * std::pow(10.0, -k / 30.0);
    if (lo_pole) pts.push_back(lo + off);
    if (hi_pole) pts.push_back(hi - off);
  }
  pts.push_back(lo);
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::remove_if(pts.begin(), pts.end(),
                           [&](double p) { return !(p >= lo && p <= hi); }),
            pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

void add_unique(std::vector<KktCandidate>& out, KktCandidate cand) {
  for (const auto& c : out) {
    if (c.at_pole == cand.at_pole && std::abs(c.lambda - cand.lambda) <=
                                         1e-10 * std::max(1.0, std::abs(cand.lambda))) {
      return;
    }
  }
  out.push_back(std::move(cand));
}

void regular_roots(const SecularSpec& spec, std::vector<KktCandidate>& out) {
  const Index m = pole_count(spec);
  std::vector<double> poles;
  for (Index i = 0; i < m; ++i) {
    if (spec.b(i) != 0.0) poles.push_back(pole_of(spec, i));
  }
  std::sort(poles.begin(), poles.end());
  poles.erase(std::unique(poles.begin(), poles.end(), same_pole), poles.end());

  const double span = poles.empty() ? 0.0 : std::max(std::abs(poles.front()), std::abs(poles.back()));
  const double reach = span * 1e6 + 1e6;
  const double c = spec.c;
  const auto g = [&](double lam) { return secular::eval_f(spec, lam) - c; };
  const auto nudge = [](double p, double dir) { return p + dir * 8.0 * kEps * std::max(1.0, std::abs(p)); };

  std::vector<double> bounds;
  bounds.push_back(-std::numeric_limits<double>::infinity());
  bounds.insert(bounds.end(), poles.begin(), poles.end());
  bounds.push_back(std::numeric_limits<double>::infinity());
  const double left_anchor = poles.empty() ? 0.0 : poles.front();
  const double right_anchor = poles.empty() ? 0.0 : poles.back();

  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    const bool lo_pole = std::isfinite(bounds[k]);
    const bool hi_pole = std::isfinite(bounds[k + 1]);
    const double lo = lo_pole ? nudge(bounds[k], 1.0) : left_anchor - reach;
    const double hi = hi_pole ? nudge(bounds[k + 1], -1.0) : right_anchor + reach;
    if (!(lo < hi)) continue;

    std::vector<double> roots;
    if (is_indefinite(spec)) {
      const std::vector<double> grid = scan_grid(lo, hi, lo_pole, hi_pole);
      double prev = g(grid.front());
      if (prev == 0.0) roots.push_back(grid.front());
      for (std::size_t j = 1; j < grid.size(); ++j) {
        const double cur = g(grid[j]);
        if (cur == 0.0) {
          roots.push_back(grid[j]);
        } else if (prev != 0.0 && (prev > 0.0) != (cur > 0.0)) {
          roots.push_back(prev > 0.0 ? bisect_sign(g, grid[j - 1], grid[j])
                                     : bisect_sign(g, grid[j], grid[j - 1]));
        }
        prev = cur;
      }
    } else {
      // f is convex on each interval: split at its minimizer, then bisect each side.
      const double mid = golden_min([&](double lam) { return g(lam); }, lo, hi);
      const double g_mid = g(mid);
      if (g_mid > 0.0) continue;
      if (g_mid == 0.0) {
        roots.push_back(mid);
        continue;
      }
      if (g(lo) > 0.0) roots.push_back(bisect_sign(g, lo, mid));
      if (g(hi) > 0.0) roots.push_back(bisect_sign(g, hi, mid));
    }
    for (double lam : roots) add_unique(out, make_candidate(spec, lam, stationary_y(spec, lam), false));
  }
}

void pole_candidates(const SecularSpec& spec, std::vector<KktCandidate>& out) {
  const Index n = spec.size();
  const Index m = pole_count(spec);
  const double tol_b = secular::default_tol_b(spec);
  std::vector<bool> done(static_cast<std::size_t>(m), false);
  for (Index k = 0; k < m; ++k) {
    if (done[static_cast<std::size_t>(k)]) continue;
    const double lam = pole_of(spec, k);
    std::vector<Index> group;
    for (Index i = k; i < m; ++i) {
      if (same_pole(pole_of(spec, i), lam)) {
        group.push_back(i);
        done[static_cast<std::size_t>(i)] = true;
      }
    }
    const bool vanishing = std::all_of(group.begin(), group.end(),
                                       [&](Index i) { return std::abs(spec.b(i)) <= tol_b; });
    if (!vanishing) continue;

    SecularSpec rest = spec;
    for (Index i : group) rest.b(i) = 0.0;
    Vector y = stationary_y(rest, lam);
    for (Index i : group) y(i) = 0.0;
    double lhs = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (i >= m) {
        lhs += 2.0 * spec.b_c(i) * y(i);
      } else {
        lhs += (is_indefinite(spec) ? spec.a(i) : 1.0) * y(i) * y(i);
      }
    }
    const double weight = is_indefinite(spec) ? spec.a(group.front()) : 1.0;
    const double square = (spec.c - lhs) / weight;
    if (square < -1e-12 * std::max(1.0, std::abs(spec.c))) continue;
    y(group.front()) = std::sqrt(std::max(square, 0.0));
    add_unique(out, make_candidate(spec, lam, std::move(y), true));
  }
}

void guard_size(Index n) {
  if (n > kMaxOracleSize) {
    throw Error(ErrorCode::ScaleGuard,
                "oracle enumeration is limited to N <= 25 (got " + std::to_string(n) + ")");
  }
}

OracleResult from_vector(const RealQcqp& problem, Vector x, double lambda, std::size_t count) {
  OracleResult out;
  out.objective = problem.objective(x);
  out.lambda = lambda;
  out.x = std::move(x);
  out.candidate_count = count;
  return out;
}

}  // namespace

std::vector<KktCandidate> enumerate_kkt(const SecularSpec& spec) {
  spec.validate();
  guard_size(spec.size());
  std::vector<KktCandidate> out;
  regular_roots(spec, out);
  pole_candidates(spec, out);
  std::sort(out.begin(), out.end(),
            [](const KktCandidate& l, const KktCandidate& r) { return l.lambda < r.lambda; });
  return out;
}

const KktCandidate& best(const std::vector<KktCandidate>& candidates) {
  if (candidates.empty()) {
    throw Error(ErrorCode::EmptyFeasibleSet, "no stationary point was found");
  }
  return *std::min_element(candidates.begin(), candidates.end(),
                           [](const KktCandidate& l, const KktCandidate& r) {
                             return l.objective < r.objective;
                           });
}

OracleResult solve(const QcqpInstance& instance, std::optional<double> eps_rank) {
  instance.validate();
  guard_size(instance.n());
  const double eps = eps_rank.value_or(linalg::default_eps_rank(instance.n()));

  if (instance.is_matrix()) {
    const ComplexQcqp& p = instance.complex_problem();
    const DecoupledMatrixProblem dp =
        transform::decouple(p, transform::simdiag_pd(p.a0, p.a1, eps));
    CMatrix y = CMatrix::Zero(p.rows(), p.cols());
    double lambda = -dp.a.minCoeff();
    std::size_t count = 1;
    if (dp.c > transform::radius_tolerance(p.c1)) {
      const Vector norms = dp.b.rowwise().norm();
      const auto cands = enumerate_kkt(SecularSpec::standard(dp.a, norms, dp.c));
      const KktCandidate& top = best(cands);
      for (Index j = 0; j < p.rows(); ++j) {
        if (norms(j) > 0.0) {
          y.row(j) = dp.b.row(j) * (top.y(j) / norms(j));
        } else {
          y(j, 0) = top.y(j);
        }
      }
      lambda = top.lambda;
      count = cands.size();
    }
    OracleResult out;
    CMatrix x = dp.recover(y);
    out.objective = p.objective(x);
    out.lambda = lambda;
    out.x = std::move(x);
    out.candidate_count = count;
    return out;
  }

  switch (instance.kind) {
    case ProblemKind::Standard:
    case ProblemKind::Augmented: {
      const LinearReduction red = transform::reduce_linear(instance, eps);
      const RealQcqp& q = red.reduced;
      const DecoupledProblem dp = transform::decouple(q, transform::simdiag_pd(q.a0, q.a1, eps));
      Vector y = Vector::Zero(dp.size());
      double lambda = -dp.a.minCoeff();
      std::size_t count = 1;
      if (dp.c > transform::radius_tolerance(q.c1)) {
        const auto cands = enumerate_kkt(SecularSpec::standard(dp.a, dp.b, dp.c));
        const KktCandidate& top = best(cands);
        y = top.y;
        lambda = top.lambda;
        count = cands.size();
      }
      return from_vector(instance.real_problem(), red.embed(dp.recover(y)), lambda, count);
    }
    case ProblemKind::RankDeficient: {
      const RealQcqp& p = instance.real_problem();
      const DecoupledProblem dp = transform::decouple(p, transform::simdiag_psd(p.a0, p.a1, eps));
      const double a_scale = std::max(1.0, dp.a.cwiseAbs().maxCoeff());
      for (Index i = dp.rank; i < dp.size(); ++i) {
        if (dp.a(i) <= eps * a_scale) {
          throw Error(ErrorCode::InvalidArgument,
                      "oracle does not cover zero-curvature directions beyond the rank");
        }
      }
      const auto cands =
          enumerate_kkt(SecularSpec::rank_deficient(dp.a, dp.b, dp.b_c, dp.rank, dp.c));
      const KktCandidate& top = best(cands);
      return from_vector(p, dp.recover(top.y), top.lambda, cands.size());
    }
    case ProblemKind::Indefinite: {
      const RealQcqp& p = instance.real_problem();
      const DecoupledProblem dp =
          transform::decouple(p, transform::simdiag_indefinite(p.a0, p.a1, eps));
      const auto cands = enumerate_kkt(SecularSpec::indefinite(dp.a, dp.b, dp.c));
      const KktCandidate& top = best(cands);
      return from_vector(p, dp.recover(top.y), top.lambda, cands.size());
    }
    case ProblemKind::MatrixComplex:
      break;
  }
  throw Error(ErrorCode::InvalidArgument, "unsupported instance kind for the oracle");
}

namespace {

// Points with (x - center)^T A1 (x - center) = rho for A1 positive definite.
double sample_ellipsoid(const RealQcqp& p, const std::function<Vector(const Vector&)>& embed,
                        const std::function<double(const Vector&)>& objective,
                        std::size_t count, Rng& rng) {
  const Matrix& a1 = p.a1.matrix();
  const Eigen::LLT<Matrix> llt(a1);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "sampling needs A1 positive definite");
  }
  const Vector center = -llt.solve(p.b1);
  const double rho = -p.b1.dot(center) - p.c1;
  if (rho < -transform::radius_tolerance(p.c1)) {
    throw Error(ErrorCode::EmptyFeasibleSet, "the constraint level set is empty");
  }
  if (rho <= transform::radius_tolerance(p.c1)) return objective(embed(center));
  const double radius = std::sqrt(rho);
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < count; ++k) {
    const Vector u = rng.unit_vector(p.size());
    const Vector x = center + radius * llt.matrixU().solve(u);
    best_value = std::min(best_value, objective(embed(x)));
  }
  return best_value;
}

}  // namespace

double sample_feasible(const QcqpInstance& instance, std::size_t count, std::uint64_t seed) {
  instance.validate();
  Rng rng(seed);
  const double inf = std::numeric_limits<double>::infinity();

  if (instance.is_matrix()) {
    const ComplexQcqp& p = instance.complex_problem();
    const Eigen::LLT<CMatrix> llt(p.a1.matrix());
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::NotPositiveDefinite, "sampling needs A1 positive definite");
    }
    const CMatrix center = -llt.solve(p.b1);
    const double rho = -(p.b1.adjoint() * center).trace().real() - p.c1;
    if (rho < -transform::radius_tolerance(p.c1)) {
      throw Error(ErrorCode::EmptyFeasibleSet, "the constraint level set is empty");
    }
    if (rho <= transform::radius_tolerance(p.c1)) return p.objective(center);
    double best_value = inf;
    for (std::size_t k = 0; k < count; ++k) {
      CMatrix u = rng.complex_normal_matrix(p.rows(), p.cols());
      u /= u.norm();
      const CMatrix x = center + std::sqrt(rho) * llt.matrixU().solve(u);
      best_value = std::min(best_value, p.objective(x));
    }
    return best_value;
  }

  const RealQcqp& p = instance.real_problem();
  const auto original = [&](const Vector& x) { return p.objective(x); };
  switch (instance.kind) {
    case ProblemKind::Standard:
      return sample_ellipsoid(p, [](const Vector& x) { return x; }, original, count, rng);
    case ProblemKind::Augmented: {
      const LinearReduction red =
          transform::reduce_linear(instance, linalg::default_eps_rank(p.size()));
      return sample_ellipsoid(red.reduced, [&](const Vector& z) { return red.embed(z); },
                              original, count, rng);
    }
    case ProblemKind::Indefinite: {
      // (x - center)^T A1 (x - center) = rho in A1's eigenbasis, split into
      // positive and negative parts and parametrized hyperbolically.
      const Evd evd = linalg::sym_evd(p.a1);
      const Vector& w = evd.eigenvalues;
      const Vector center = -evd.vectors * ((evd.vectors.transpose() * p.b1).cwiseQuotient(w));
      const double rho = -p.b1.dot(center) - p.c1;
      std::vector<Index> pos;
      std::vector<Index> neg;
      for (Index i = 0; i < w.size(); ++i) (w(i) > 0.0 ? pos : neg).push_back(i);
      if (pos.empty() || neg.empty()) {
        throw Error(ErrorCode::InvalidArgument, "A1 is not indefinite");
      }
      const auto weighted_unit = [&](const std::vector<Index>& idx) {
        const Vector u = rng.unit_vector(static_cast<Index>(idx.size()));
        Vector z = Vector::Zero(w.size());
        for (std::size_t k = 0; k < idx.size(); ++k) {
          z(idx[k]) = u(static_cast<Index>(k)) / std::sqrt(std::abs(w(idx[k])));
        }
        return z;
      };
      double best_value = inf;
      for (std::size_t k = 0; k < count; ++k) {
        // Bounded hyperbolic angle: half the draws near the vertex, half spread out.
        const double s = k % 2 == 0 ? rng.uniform(0.0, 1.0) : rng.uniform(0.0, 6.0);
        const double r = std::sqrt(std::abs(rho));
        double p_len = 0.0;
        double n_len = 0.0;
        if (rho > 0.0) {
          p_len = r * std::cosh(s);
          n_len = r * std::sinh(s);
        } else if (rho < 0.0) {
          p_len = r * std::sinh(s);
          n_len = r * std::cosh(s);
        } else {
          p_len = n_len = std::expm1(s);
        }
        const Vector z = p_len * weighted_unit(pos) + n_len * weighted_unit(neg);
        best_value = std::min(best_value, p.objective(center + evd.vectors * z));
      }
      return best_value;
    }
    case ProblemKind::RankDeficient: {
      // Null-space coordinates are drawn freely, then the range part is put on
      // the ellipsoid that the remaining constraint defines.
      const Evd evd = linalg::sym_evd(p.a1);
      const Vector& w = evd.eigenvalues;
      const double threshold = linalg::default_eps_rank(p.size()) * w.maxCoeff();
      std::vector<Index> range;
      std::vector<Index> null;
      for (Index i = 0; i < w.size(); ++i) (w(i) > threshold ? range : null).push_back(i);
      const Vector beta = evd.vectors.transpose() * p.b1;
      double head = -p.c1;
      for (Index i : range) head += beta(i) * beta(i) / w(i);
      const double spread = 1.0 + std::sqrt(std::abs(head));
      double best_value = inf;
      std::size_t accepted = 0;
      for (std::size_t k = 0; k < 50 * count + 50 && accepted < count; ++k) {
        Vector z = Vector::Zero(w.size());
        double rho = head;
        for (Index i : null) {
          z(i) = spread * rng.normal();
          rho -= 2.0 * beta(i) * z(i);
        }
        if (rho < 0.0) continue;
        const Vector u = rng.unit_vector(static_cast<Index>(range.size()));
        for (std::size_t j = 0; j < range.size(); ++j) {
          const Index i = range[j];
          z(i) = -beta(i) / w(i) + std::sqrt(rho) * u(static_cast<Index>(j)) / std::sqrt(w(i));
        }
        best_value = std::min(best_value, p.objective(evd.vectors * z));
        ++accepted;
      }
      if (accepted == 0) throw Error(ErrorCode::EmptyFeasibleSet, "no feasible sample was accepted");
      return best_value;
    }
    case ProblemKind::MatrixComplex:
      break;
  }
  throw Error(ErrorCode::InvalidArgument, "unsupported instance kind for sampling");
}

Validity classify_validity(const Solution& solution, const QcqpInstance& instance) {
  Validity out;
  if (instance.is_matrix()) {
    if (!solution.is_matrix()) throw Error(ErrorCode::InvalidArgument, "expected a matrix solution");
    out.residual = std::abs(instance.complex_problem().constraint(solution.matrix()));
  } else {
    if (solution.is_matrix()) throw Error(ErrorCode::InvalidArgument, "expected a vector solution");
    out.residual = std::abs(instance.real_problem().constraint(solution.vector()));
  }
  out.valid = out.residual <= kValidityBar;
  out.valid_scaled = out.residual <= kValidityBar * solver::constraint_scale(instance);
  return out;
}

}  // namespace qcqp::oracle
