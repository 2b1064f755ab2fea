#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ngca {

enum class ErrorCode {
  EmptyInput,
  DimensionMismatch,
  UnequalRank,
  RankDeficient,
  DegenerateStep,
  MomentGapTooSmall,
  SingularCovariance,
  AllSamplesTruncated,
  VarianceOutOfRange,
  QuadratureNonconvergent,
  NotIsotropic,
  InvalidArgument,
  ConfigInvalid,
  IoError,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as this exception; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the CSV reader; row and col are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::size_t col, const std::string& what);

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

// Raised by config validation; key_path is a JSON-pointer-like path such as
// "/instance/laws/1/kind".
class ConfigError : public Error {
 public:
  ConfigError(std::string key_path, const std::string& what);

  const std::string& key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace ngca
