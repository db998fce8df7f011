#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace clifford {

enum class ErrorCode {
  UnsupportedFamily,
  ParameterTooSmall,
  DimensionMismatch,
  ZeroElement,
  NotTripotent,
  MaximalityNotCertified,
  NotTangent,
  ClusteringAmbiguous,
  RationalReconstructionFailed,
  NonFaithfulAction,
  NotRectangular,
  RankTooLarge,
  NotPlanar,
  NotDense,
  RelationResidualTooLarge,
  XiNotContained,
  DegenerateRootSpace,
  SpectralAnomaly,
  RootMatchFailed,
  StrongOrthogonalityViolated,
  IntegerOverflow,
  EmptyReport,
  IoFailure,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::ParameterTooSmall: return "ParameterTooSmall";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroElement: return "ZeroElement";
    case ErrorCode::NotTripotent: return "NotTripotent";
    case ErrorCode::MaximalityNotCertified: return "MaximalityNotCertified";
    case ErrorCode::NotTangent: return "NotTangent";
    case ErrorCode::ClusteringAmbiguous: return "ClusteringAmbiguous";
    case ErrorCode::RationalReconstructionFailed: return "RationalReconstructionFailed";
    case ErrorCode::NonFaithfulAction: return "NonFaithfulAction";
    case ErrorCode::NotRectangular: return "NotRectangular";
    case ErrorCode::RankTooLarge: return "RankTooLarge";
    case ErrorCode::NotPlanar: return "NotPlanar";
    case ErrorCode::NotDense: return "NotDense";
    case ErrorCode::RelationResidualTooLarge: return "RelationResidualTooLarge";
    case ErrorCode::XiNotContained: return "XiNotContained";
    case ErrorCode::DegenerateRootSpace: return "DegenerateRootSpace";
    case ErrorCode::SpectralAnomaly: return "SpectralAnomaly";
    case ErrorCode::RootMatchFailed: return "RootMatchFailed";
    case ErrorCode::StrongOrthogonalityViolated: return "StrongOrthogonalityViolated";
    case ErrorCode::IntegerOverflow: return "IntegerOverflow";
    case ErrorCode::EmptyReport: return "EmptyReport";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the pipeline in particular) can record it instead of aborting.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace clifford
