#include "powershap/errors.hpp"

namespace powershap {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::DuplicateFeatureName: return "DuplicateFeatureName";
    case ErrorCode::SingleClassTarget: return "SingleClassTarget";
    case ErrorCode::MulticlassTarget: return "MulticlassTarget";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::SplitTooSmall: return "SplitTooSmall";
    case ErrorCode::TooFewIterations: return "TooFewIterations";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::EmptyVector: return "EmptyVector";
    case ErrorCode::InvalidDf: return "InvalidDf";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::TooManyFeatures: return "TooManyFeatures";
    case ErrorCode::ZeroPooledStd: return "ZeroPooledStd";
    case ErrorCode::SeriesNonConvergence: return "SeriesNonConvergence";
    case ErrorCode::NoRootBracket: return "NoRootBracket";
    case ErrorCode::DegenerateTraining: return "DegenerateTraining";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroPooledStd:
    case ErrorCode::SeriesNonConvergence:
    case ErrorCode::NoRootBracket:
    case ErrorCode::DegenerateTraining:
    case ErrorCode::Internal:
      return false;
    default:
      return true;
  }
}

namespace {

std::string decorate(ErrorCode code, const std::string& message,
                     std::optional<std::size_t> row,
                     std::optional<std::size_t> column) {
  std::string out(error_code_name(code));
  if (row || column) {
    out += "(";
    if (row) out += "row " + std::to_string(*row);
    if (row && column) out += ", ";
    if (column) out += "col " + std::to_string(*column);
    out += ")";
  }
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> row, std::optional<std::size_t> column)
    : std::runtime_error(decorate(code, message, row, column)),
      code_(code),
      row_(row),
      column_(column) {}

}  // namespace powershap
