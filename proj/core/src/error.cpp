#include "qcqp/error.hpp"

namespace qcqp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::RankDeficientRows: return "RankDeficientRows";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InfeasibleConstraint: return "InfeasibleConstraint";
    case ErrorCode::FullRank: return "FullRank";
    case ErrorCode::SingularConstraintMatrix: return "SingularConstraintMatrix";
    case ErrorCode::PoleEvaluation: return "PoleEvaluation";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::NegativeDeficit: return "NegativeDeficit";
    case ErrorCode::ScaleGuard: return "ScaleGuard";
    case ErrorCode::EmptyFeasibleSet: return "EmptyFeasibleSet";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace qcqp
