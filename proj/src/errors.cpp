#include "scfa/errors.hpp"

#include <sstream>

namespace scfa {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::PartitionMismatch: return "PartitionMismatch";
    case ErrorKind::InvalidPartition: return "InvalidPartition";
    case ErrorKind::StructureViolation: return "StructureViolation";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::InternalConsistency: return "InternalConsistency";
    case ErrorKind::DegenerateSample: return "DegenerateSample";
    case ErrorKind::SampleTooSmall: return "SampleTooSmall";
    case ErrorKind::CommunityTooSmall: return "CommunityTooSmall";
    case ErrorKind::NonPositiveVariance: return "NonPositiveVariance";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::RaggedRows: return "RaggedRows";
    case ErrorKind::NonNumericCell: return "NonNumericCell";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::MissingVariable: return "MissingVariable";
    case ErrorKind::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularMatrix:
    case ErrorKind::InternalConsistency:
    case ErrorKind::NotSymmetric:
    case ErrorKind::NonPositiveVariance:
      return true;
    default:
      return false;
  }
}

namespace {

std::string structure_message(double dev, int r, int c) {
  std::ostringstream os;
  os << "block (" << r + 1 << "," << c + 1
     << ") is not uniform: max deviation " << dev;
  return os.str();
}

std::string parse_message(std::size_t line, std::size_t column,
                          const std::string& detail) {
  std::ostringstream os;
  os << "line " << line;
  if (column > 0) os << ", column " << column;
  os << ": " << detail;
  return os.str();
}

}  // namespace

StructureViolation::StructureViolation(double max_deviation, int row_block,
                                       int col_block)
    : Error(ErrorKind::StructureViolation,
            structure_message(max_deviation, row_block, col_block)),
      max_deviation_(max_deviation),
      row_block_(row_block),
      col_block_(col_block) {}

ParseError::ParseError(ErrorKind kind, std::size_t line, std::size_t column,
                       const std::string& detail)
    : Error(kind, parse_message(line, column, detail)),
      line_(line),
      column_(column) {}

}  // namespace scfa
