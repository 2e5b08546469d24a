#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace powershap {

enum class ErrorCode {
  // Input validation. The CLI maps these to exit code 2.
  EmptyDataset,
  DimensionMismatch,
  NonFiniteValue,
  DuplicateFeatureName,
  SingleClassTarget,
  MulticlassTarget,
  InvalidConfig,
  InvalidSpec,
  ParseError,
  FileNotFound,
  SplitTooSmall,
  TooFewIterations,
  TooFewSamples,
  EmptyVector,
  InvalidDf,
  InvalidProbability,
  TooManyFeatures,
  // Numerical or internal failures.
  ZeroPooledStd,
  SeriesNonConvergence,
  NoRootBracket,
  DegenerateTraining,
  Internal,
};

std::string_view error_code_name(ErrorCode code);

/// True for codes that describe bad user input rather than an engine fault.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> row = std::nullopt,
        std::optional<std::size_t> column = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> row() const noexcept { return row_; }
  std::optional<std::size_t> column() const noexcept { return column_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> row_;
  std::optional<std::size_t> column_;
};

}  // namespace powershap
