#ifndef SCFA_ERRORS_HPP
#define SCFA_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace scfa {

enum class ErrorKind {
  DimensionMismatch,
  PartitionMismatch,
  InvalidPartition,
  StructureViolation,
  SingularMatrix,
  NotSymmetric,
  InternalConsistency,
  DegenerateSample,
  SampleTooSmall,
  CommunityTooSmall,
  NonPositiveVariance,
  InvalidSpec,
  ShapeMismatch,
  ParseError,
  RaggedRows,
  NonNumericCell,
  UnknownVariable,
  MissingVariable,
  IoFailure,
};

std::string_view to_string(ErrorKind kind);

// Numerical failures map to CLI exit code 3, everything else to 2.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Carries the worst within-block deviation seen by from_dense in strict mode.
class StructureViolation : public Error {
 public:
  StructureViolation(double max_deviation, int row_block, int col_block);

  double max_deviation() const noexcept { return max_deviation_; }
  int row_block() const noexcept { return row_block_; }
  int col_block() const noexcept { return col_block_; }

 private:
  double max_deviation_;
  int row_block_;
  int col_block_;
};

class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, std::size_t line, std::size_t column,
             const std::string& detail);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace scfa

#endif  // SCFA_ERRORS_HPP
