#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mavar {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NegativeEntry,
  RowSumViolation,
  Reducible,
  NumericalFailure,
  NotStationary,
  NotReversible,
  NotCentered,
  DegenerateKernel,
  SingularK,
  RouteDisagreement,
  ZeroVariance,
  InfeasibleXi,
  StationaryMismatch,
  NotProbabilityVector,
  RowSumNonzero,
  NotAntisymmetric,
  DensityExceedsOne,
  SpecInvalid,
  AlphaOutOfRange,
  RowColSumNonzero,
  NegativeOffDiagonal,
  DiagonalTooNegativeOnK,
  NotPeskunOrdered,
  BadInitial,
  TooShort,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code and, for some codes, the
/// offending scalar (e.g. the spectral radius for DegenerateKernel).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<double> value = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<double> value() const noexcept { return value_; }

 private:
  ErrorCode code_;
  std::optional<double> value_;
};

}  // namespace mavar
