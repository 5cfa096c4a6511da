#include "mavar/error.hpp"

namespace mavar {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::RowSumViolation: return "RowSumViolation";
    case ErrorCode::Reducible: return "Reducible";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::NotStationary: return "NotStationary";
    case ErrorCode::NotReversible: return "NotReversible";
    case ErrorCode::NotCentered: return "NotCentered";
    case ErrorCode::DegenerateKernel: return "DegenerateKernel";
    case ErrorCode::SingularK: return "SingularK";
    case ErrorCode::RouteDisagreement: return "RouteDisagreement";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::InfeasibleXi: return "InfeasibleXi";
    case ErrorCode::StationaryMismatch: return "StationaryMismatch";
    case ErrorCode::NotProbabilityVector: return "NotProbabilityVector";
    case ErrorCode::RowSumNonzero: return "RowSumNonzero";
    case ErrorCode::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorCode::DensityExceedsOne: return "DensityExceedsOne";
    case ErrorCode::SpecInvalid: return "SpecInvalid";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::RowColSumNonzero: return "RowColSumNonzero";
    case ErrorCode::NegativeOffDiagonal: return "NegativeOffDiagonal";
    case ErrorCode::DiagonalTooNegativeOnK: return "DiagonalTooNegativeOnK";
    case ErrorCode::NotPeskunOrdered: return "NotPeskunOrdered";
    case ErrorCode::BadInitial: return "BadInitial";
    case ErrorCode::TooShort: return "TooShort";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<double> value)
    : std::runtime_error("[" + std::string(to_string(code)) + "] " + message),
      code_(code),
      value_(value) {}

}  // namespace mavar
