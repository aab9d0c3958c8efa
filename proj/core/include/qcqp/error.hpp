#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qcqp {

enum class ErrorCode {
  NonFinite,
  ConvergenceFailure,
  NotPositiveDefinite,
  NotPsd,
  RankDeficientRows,
  DimensionMismatch,
  InfeasibleConstraint,
  FullRank,
  SingularConstraintMatrix,
  PoleEvaluation,
  BracketFailure,
  MaxIterExceeded,
  NegativeDeficit,
  ScaleGuard,
  EmptyFeasibleSet,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Bisection ran out of iterations; the best iterate found so far is kept.
class MaxIterExceeded : public Error {
 public:
  MaxIterExceeded(double best_lambda, const std::string& what)
      : Error(ErrorCode::MaxIterExceeded, what), best_lambda_(best_lambda) {}

  double best_lambda() const noexcept { return best_lambda_; }

 private:
  double best_lambda_;
};

}  // namespace qcqp
