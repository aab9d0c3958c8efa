#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "qcqp/problem.hpp"
#include "qcqp/secular.hpp"
#include "qcqp/solver.hpp"

namespace qcqp {

/// One first-order stationary point of a decoupled problem.
struct KktCandidate {
  double lambda = 0.0;
  Vector y;
  double objective = 0.0;
  bool in_second_order_region = false;
  bool at_pole = false;
};

/// Best KKT point of a full instance, mapped back to the original variable.
struct OracleResult {
  double objective = 0.0;
  double lambda = 0.0;
  std::variant<Vector, CMatrix> x;
  std::size_t candidate_count = 0;
};

struct Validity {
  double residual = 0.0;
  bool valid = false;         // residual <= 1e-5
  bool valid_scaled = false;  // residual <= 1e-5 * solver::constraint_scale
};

namespace oracle {

inline constexpr Index kMaxOracleSize = 25;
inline constexpr double kValidityBar = 1e-5;

/// Every stationary point of the decoupled problem described by spec: all
/// roots of f(lambda) = c on every inter-pole interval, plus hard-case points
/// at poles whose numerators vanish. Works for all three secular variants.
std::vector<KktCandidate> enumerate_kkt(const SecularSpec& spec);

/// Candidate with the smallest objective; throws EmptyFeasibleSet if none.
const KktCandidate& best(const std::vector<KktCandidate>& candidates);

/// Global optimum of the instance by exhaustive KKT enumeration (N <= 25).
OracleResult solve(const QcqpInstance& instance, std::optional<double> eps_rank = std::nullopt);

/// Minimum objective over `count` random feasible points.
double sample_feasible(const QcqpInstance& instance, std::size_t count, std::uint64_t seed);

Validity classify_validity(const Solution& solution, const QcqpInstance& instance);

}  // namespace oracle
}  // namespace qcqp
