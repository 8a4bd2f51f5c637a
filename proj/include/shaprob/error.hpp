#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shaprob {

enum class ErrorKind {
  // argument validation
  InvalidArgument,
  // data ingestion and shaping
  MissingColumn,
  NonNumericCell,
  NonBinaryLabel,
  EmptyDataset,
  DuplicateFeatureName,
  DegenerateSplit,
  IndexOutOfRange,
  InfeasibleProportion,
  // modelling and evaluation
  SingleClassTrainingSet,
  ArityMismatch,
  SingleClassLabels,
  NoPositiveLabels,
  DegenerateCurve,
  TooManyFeaturesForExactMode,
  IncompleteTable,
  GridTooCoarse,
};

enum class ErrorCategory { Argument, Data, Computation };

std::string_view to_string(ErrorKind kind) noexcept;
ErrorCategory category_of(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` carries the contract
/// violation so callers (notably the CLI) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_of(kind_); }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::NonNumericCell: return "NonNumericCell";
    case ErrorKind::NonBinaryLabel: return "NonBinaryLabel";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::DuplicateFeatureName: return "DuplicateFeatureName";
    case ErrorKind::DegenerateSplit: return "DegenerateSplit";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::InfeasibleProportion: return "InfeasibleProportion";
    case ErrorKind::SingleClassTrainingSet: return "SingleClassTrainingSet";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::SingleClassLabels: return "SingleClassLabels";
    case ErrorKind::NoPositiveLabels: return "NoPositiveLabels";
    case ErrorKind::DegenerateCurve: return "DegenerateCurve";
    case ErrorKind::TooManyFeaturesForExactMode: return "TooManyFeaturesForExactMode";
    case ErrorKind::IncompleteTable: return "IncompleteTable";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
  }
  return "Unknown";
}

inline ErrorCategory category_of(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument:
      return ErrorCategory::Argument;
    case ErrorKind::MissingColumn:
    case ErrorKind::NonNumericCell:
    case ErrorKind::NonBinaryLabel:
    case ErrorKind::EmptyDataset:
    case ErrorKind::DuplicateFeatureName:
    case ErrorKind::DegenerateSplit:
    case ErrorKind::IndexOutOfRange:
    case ErrorKind::InfeasibleProportion:
      return ErrorCategory::Data;
    default:
      return ErrorCategory::Computation;
  }
}

}  // namespace shaprob
