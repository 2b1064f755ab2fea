#include "ngca/error.hpp"

namespace ngca {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnequalRank: return "UnequalRank";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DegenerateStep: return "DegenerateStep";
    case ErrorCode::MomentGapTooSmall: return "MomentGapTooSmall";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::AllSamplesTruncated: return "AllSamplesTruncated";
    case ErrorCode::VarianceOutOfRange: return "VarianceOutOfRange";
    case ErrorCode::QuadratureNonconvergent: return "QuadratureNonconvergent";
    case ErrorCode::NotIsotropic: return "NotIsotropic";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

ParseError::ParseError(std::size_t row, std::size_t col, const std::string& what)
    : Error(ErrorCode::ParseError,
            "row " + std::to_string(row) + ", col " + std::to_string(col) + ": " + what),
      row_(row),
      col_(col) {}

ConfigError::ConfigError(std::string key_path, const std::string& what)
    : Error(ErrorCode::ConfigInvalid, key_path + ": " + what), key_path_(std::move(key_path)) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace ngca
