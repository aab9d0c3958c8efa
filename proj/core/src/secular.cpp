#include "qcqp/secular.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcqp/error.hpp"

namespace qcqp {

SecularSpec SecularSpec::standard(Vector a, Vector b, double c) {
  SecularSpec s;
  s.variant = SecularVariant::Standard;
  s.a = std::move(a);
  s.b = std::move(b);
  s.rank = s.a.size();
  s.c = c;
  s.validate();
  return s;
}

SecularSpec SecularSpec::rank_deficient(Vector a, Vector b, Vector b_c, Index rank, double c) {
  SecularSpec s;
  s.variant = SecularVariant::RankDeficient;
  s.a = std::move(a);
  s.b = std::move(b);
  s.b_c = std::move(b_c);
  s.rank = rank;
  s.c = c;
  s.validate();
  return s;
}

SecularSpec SecularSpec::indefinite(Vector a, Vector b, double c) {
  SecularSpec s;
  s.variant = SecularVariant::Indefinite;
  s.a = std::move(a);
  s.b = std::move(b);
  s.rank = s.a.size();
  s.c = c;
  s.validate();
  return s;
}

void SecularSpec::validate() const {
  if (a.size() < 1 || b.size() != a.size()) {
    throw Error(ErrorCode::DimensionMismatch, "secular spec needs matching non-empty a and b");
  }
  if (!a.allFinite() || !b.allFinite() || !std::isfinite(c)) {
    throw Error(ErrorCode::NonFinite, "secular spec contains NaN or Inf");
  }
  switch (variant) {
    case SecularVariant::Standard:
      break;
    case SecularVariant::RankDeficient: {
      if (b_c.size() != a.size() || rank < 1 || rank > a.size()) {
        throw Error(ErrorCode::DimensionMismatch, "rank-deficient spec has bad rank or b_c");
      }
      if (!b_c.head(rank).isZero(0.0)) {
        throw Error(ErrorCode::InvalidArgument, "b_c must vanish on the first r entries");
      }
      const double tol = 1e-8 * std::max(1.0, a.cwiseAbs().maxCoeff());
      if (a.minCoeff() < -tol) {
        throw Error(ErrorCode::InvalidArgument, "rank-deficient spec needs a >= 0");
      }
      break;
    }
    case SecularVariant::Indefinite:
      if (!(a.minCoeff() < 0.0 && a.maxCoeff() > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "indefinite spec needs a of both signs");
      }
      break;
  }
}

namespace secular {
namespace {

constexpr double kPoleGuard = 1e-300;

// Index range whose terms have poles: all of them except the linear tail of
// the rank-deficient variant.
Index pole_count(const SecularSpec& spec) {
  return spec.variant == SecularVariant::RankDeficient ? spec.rank : spec.size();
}

double denominator(const SecularSpec& spec, Index i, double lambda) {
  return spec.variant == SecularVariant::Indefinite ? 1.0 + lambda * spec.a(i)
                                                    : spec.a(i) + lambda;
}

void check_pole(double g, double numerator, double lambda) {
  if (std::abs(g) <= kPoleGuard && numerator != 0.0) {
    throw Error(ErrorCode::PoleEvaluation,
                "secular function evaluated at an active pole (lambda=" + std::to_string(lambda) +
                    ")");
  }
}

double term(const SecularSpec& spec, Index i, double lambda) {
  const double bi = spec.b(i);
  if (i >= pole_count(spec)) {
    // Linear tail of the rank-deficient variant.
    const double bci = spec.b_c(i);
    const double numerator = bci * bi - lambda * bci * bci;
    if (numerator == 0.0) return 0.0;
    if (!(spec.a(i) > 0.0)) {
      throw Error(ErrorCode::PoleEvaluation, "zero a_i outside the rank with nonzero numerator");
    }
    return 2.0 * numerator / spec.a(i);
  }
  if (bi == 0.0) return 0.0;
  const double g = denominator(spec, i, lambda);
  check_pole(g, bi, lambda);
  const double ratio = bi / g;
  return spec.variant == SecularVariant::Indefinite ? spec.a(i) * ratio * ratio : ratio * ratio;
}

double dterm(const SecularSpec& spec, Index i, double lambda) {
  const double bi = spec.b(i);
  if (i >= pole_count(spec)) {
    const double bci = spec.b_c(i);
    if (bci == 0.0) return 0.0;
    if (!(spec.a(i) > 0.0)) {
      throw Error(ErrorCode::PoleEvaluation, "zero a_i outside the rank with nonzero numerator");
    }
    return -2.0 * bci * bci / spec.a(i);
  }
  if (bi == 0.0) return 0.0;
  const double g = denominator(spec, i, lambda);
  check_pole(g, bi, lambda);
  const double weight = spec.variant == SecularVariant::Indefinite ? spec.a(i) * spec.a(i) : 1.0;
  return -2.0 * weight * bi * bi / (g * g * g);
}

double sum_terms(const SecularSpec& spec, double lambda, const std::vector<bool>& skip) {
  double total = 0.0;
  for (Index i = 0; i < spec.size(); ++i) {
    if (!skip.empty() && skip[static_cast<std::size_t>(i)]) continue;
    total += term(spec, i, lambda);
  }
  return total;
}

double a_scale(const SecularSpec& spec) {
  return std::max(1.0, spec.a.cwiseAbs().maxCoeff());
}

struct PoleGroup {
  double lambda;
  std::vector<Index> indices;
};

// Indices whose pole coincides (to round-off) with the interval endpoint.
PoleGroup blocking_group(const SecularSpec& spec, PoleSide side) {
  const Index m = pole_count(spec);
  const double tol = 1e-12 * a_scale(spec);
  PoleGroup group;
  if (spec.variant == SecularVariant::Indefinite) {
    const double extreme = side == PoleSide::Lower ? spec.a.maxCoeff() : spec.a.minCoeff();
    group.lambda = -1.0 / extreme;
    for (Index i = 0; i < m; ++i) {
      if (std::abs(spec.a(i) - extreme) <= tol) group.indices.push_back(i);
    }
  } else {
    const double extreme = spec.a.head(m).minCoeff();
    group.lambda = -extreme;
    for (Index i = 0; i < m; ++i) {
      if (spec.a(i) - extreme <= tol) group.indices.push_back(i);
    }
  }
  return group;
}

}  // namespace

double eval_f(const SecularSpec& spec, double lambda) { return sum_terms(spec, lambda, {}); }

double eval_df(const SecularSpec& spec, double lambda) {
  double total = 0.0;
  for (Index i = 0; i < spec.size(); ++i) total += dterm(spec, i, lambda);
  return total;
}

AdmissibleInterval admissible_interval(const SecularSpec& spec) {
  AdmissibleInterval out;
  switch (spec.variant) {
    case SecularVariant::Standard:
      out.lower = -spec.a.minCoeff();
      break;
    case SecularVariant::RankDeficient:
      out.lower = -spec.a.head(spec.rank).minCoeff();
      break;
    case SecularVariant::Indefinite:
      out.lower = -1.0 / spec.a.maxCoeff();
      out.upper = -1.0 / spec.a.minCoeff();
      break;
  }
  return out;
}

double default_tol_b(const SecularSpec& spec, double rel) {
  return std::max(rel * spec.b.cwiseAbs().maxCoeff(), 1e-300);
}

HardCaseInfo detect_hard_case(const SecularSpec& spec, double tol_b) {
  const auto try_side = [&](PoleSide side) {
    HardCaseInfo info;
    const PoleGroup group = blocking_group(spec, side);
    info.side = side;
    info.blocking = group.indices;
    info.lambda_pinned = group.lambda;
    const bool numerators_vanish = std::all_of(
        group.indices.begin(), group.indices.end(),
        [&](Index i) { return std::abs(spec.b(i)) <= tol_b; });
    if (!numerators_vanish) return info;
    std::vector<bool> skip(static_cast<std::size_t>(spec.size()), false);
    for (Index i : group.indices) skip[static_cast<std::size_t>(i)] = true;
    info.f_limit = sum_terms(spec, group.lambda, skip);
    // f decreases across the interval, so the root escapes through the lower
    // pole when c >= f_limit there and through the upper pole when c <= f_limit.
    info.is_hard = side == PoleSide::Lower ? info.f_limit <= spec.c : info.f_limit >= spec.c;
    return info;
  };

  HardCaseInfo lower = try_side(PoleSide::Lower);
  if (lower.is_hard || spec.variant != SecularVariant::Indefinite) return lower;
  HardCaseInfo upper = try_side(PoleSide::Upper);
  return upper.is_hard ? upper : lower;
}

Bracket bracket_root(const SecularSpec& spec, const AdmissibleInterval& interval, double c) {
  const auto above = [&](double lambda) { return eval_f(spec, lambda) > c; };
  constexpr int kMaxDoublings = 200;
  constexpr int kMaxHalvings = 2100;

  if (!std::isfinite(interval.upper)) {
    const double pole = interval.lower;
    const double scale = std::max(1.0, std::abs(pole));
    double probe = pole + scale;
    if (above(probe)) {
      double lo = probe;
      double step = scale;
      for (int k = 0; k < kMaxDoublings; ++k) {
        step *= 2.0;
        const double hi = pole + step;
        if (!above(hi)) return {lo, hi};
        lo = hi;
      }
      throw Error(ErrorCode::BracketFailure,
                  "f stays above c after 200 doublings; c is below resolvable scale");
    }
    double hi = probe;
    double delta = scale;
    for (int k = 0; k < kMaxHalvings; ++k) {
      delta *= 0.5;
      const double lo = pole + delta;
      if (lo <= pole) break;
      if (above(lo)) return {lo, hi};
      hi = lo;
    }
    throw Error(ErrorCode::BracketFailure,
                "f stays below c up to the pole; undetected hard case or inconsistent data");
  }

  // Bounded interval: approach both endpoints from the middle.
  const double lower = interval.lower;
  const double upper = interval.upper;
  const double width = upper - lower;
  const double mid = lower + 0.5 * width;
  if (above(mid)) {
    double lo = mid;
    double delta = 0.5;
    for (int k = 0; k < kMaxHalvings; ++k) {
      delta *= 0.5;
      const double hi = upper - delta * width;
      if (hi >= upper) break;
      if (!above(hi)) return {lo, hi};
      lo = hi;
    }
    throw Error(ErrorCode::BracketFailure, "f stays above c up to the upper pole");
  }
  double hi = mid;
  double delta = 0.5;
  for (int k = 0; k < kMaxHalvings; ++k) {
    delta *= 0.5;
    const double lo = lower + delta * width;
    if (lo <= lower) break;
    if (above(lo)) return {lo, hi};
    hi = lo;
  }
  throw Error(ErrorCode::BracketFailure, "f stays below c down to the lower pole");
}

BisectionResult bisect(const SecularSpec& spec, double lo, double hi, double c,
                       double tol_lambda, double tol_f, int max_iter) {
  if (!(lo < hi) || !(eval_f(spec, lo) > c) || eval_f(spec, hi) > c) {
    throw Error(ErrorCode::BracketFailure, "bisection needs f(lo) > c >= f(hi) with lo < hi");
  }
  BisectionResult out;
  for (int it = 1; it <= max_iter; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    out.iterations = it;
    if (mid <= lo || mid >= hi) {
      // Bracket already spans adjacent doubles.
      out.lambda = std::abs(eval_f(spec, lo) - c) < std::abs(eval_f(spec, hi) - c) ? lo : hi;
      return out;
    }
    const double fm = eval_f(spec, mid);
    if (fm == c) {
      out.lambda = mid;
      return out;
    }
    (fm > c ? lo : hi) = mid;
    // A narrow bracket is not enough where f is steep: also require a small residual.
    if (hi - lo <= tol_lambda * std::max(1.0, std::abs(mid)) &&
        std::abs(fm - c) <= tol_f * std::max(1.0, std::abs(c))) {
      out.lambda = mid;
      return out;
    }
  }
  const double best = lo + 0.5 * (hi - lo);
  if (std::abs(eval_f(spec, best) - c) <= tol_f * std::max(1.0, std::abs(c))) {
    out.lambda = best;
    return out;
  }
  throw MaxIterExceeded(best, "bisection did not reach tolerance in " +
                                  std::to_string(max_iter) + " iterations");
}

Vector primal_from_lambda(const SecularSpec& spec, double lambda, const HardCaseInfo& hard) {
  const Index n = spec.size();
  const Index m = pole_count(spec);
  const double lam = hard.is_hard ? hard.lambda_pinned : lambda;
  std::vector<bool> blocked(static_cast<std::size_t>(n), false);
  if (hard.is_hard) {
    for (Index i : hard.blocking) blocked[static_cast<std::size_t>(i)] = true;
  }

  Vector y = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    if (blocked[static_cast<std::size_t>(i)]) continue;
    if (i >= m) {
      const double numerator = spec.b(i) - lam * spec.b_c(i);
      if (numerator == 0.0) continue;
      if (!(spec.a(i) > 0.0)) {
        throw Error(ErrorCode::PoleEvaluation, "zero a_i outside the rank with nonzero numerator");
      }
      y(i) = numerator / spec.a(i);
      continue;
    }
    if (spec.b(i) == 0.0) continue;
    const double g = denominator(spec, i, lam);
    check_pole(g, spec.b(i), lam);
    y(i) = spec.b(i) / g;
  }
  if (!hard.is_hard || hard.blocking.empty()) return y;

  // Put the constraint deficit on the first blocking coordinate.
  const Index j = hard.blocking.front();
  const double deficit = -constraint(spec, y);
  const double weight = spec.variant == SecularVariant::Indefinite ? spec.a(j) : 1.0;
  double square = deficit / weight;
  if (square < 0.0) {
    if (square < -1e-10 * std::max(1.0, std::abs(spec.c) / std::abs(weight))) {
      throw Error(ErrorCode::NegativeDeficit,
                  "hard-case deficit is negative (" + std::to_string(square) + ")");
    }
    square = 0.0;
  }
  y(j) = std::sqrt(square);
  return y;
}

SecularSolution solve(const SecularSpec& spec, const SecularOptions& options) {
  spec.validate();
  SecularSolution out;
  out.hard = detect_hard_case(spec, default_tol_b(spec, options.tol_b));
  if (out.hard.is_hard) {
    out.lambda = out.hard.lambda_pinned;
  } else {
    const AdmissibleInterval interval = admissible_interval(spec);
    const Bracket bracket = bracket_root(spec, interval, spec.c);
    const BisectionResult root = bisect(spec, bracket.lo, bracket.hi, spec.c, options.tol_lambda,
                                        options.tol_f, options.max_iter);
    out.lambda = root.lambda;
    out.iterations = root.iterations;
  }
  out.y = primal_from_lambda(spec, out.lambda, out.hard);
  return out;
}

double objective(const SecularSpec& spec, const Vector& y) {
  if (spec.variant == SecularVariant::Indefinite) return y.squaredNorm() - 2.0 * spec.b.dot(y);
  return y.dot(spec.a.cwiseProduct(y)) - 2.0 * spec.b.dot(y);
}

double constraint(const SecularSpec& spec, const Vector& y) {
  switch (spec.variant) {
    case SecularVariant::Standard:
      return y.squaredNorm() - spec.c;
    case SecularVariant::RankDeficient:
      return y.head(spec.rank).squaredNorm() + 2.0 * spec.b_c.dot(y) - spec.c;
    case SecularVariant::Indefinite:
      return y.dot(spec.a.cwiseProduct(y)) - spec.c;
  }
  return 0.0;
}

}  // namespace secular
}  // namespace qcqp
