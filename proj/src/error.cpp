#include "bnscore/error.hpp"

namespace bnscore {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::CycleDetected: return "CycleDetected";
    case ErrorKind::DuplicateParent: return "DuplicateParent";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::InvalidVariable: return "InvalidVariable";
    case ErrorKind::StateOutOfRange: return "StateOutOfRange";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::RowSumNotOne: return "RowSumNotOne";
    case ErrorKind::MissingCptRow: return "MissingCptRow";
    case ErrorKind::HeaderMismatch: return "HeaderMismatch";
    case ErrorKind::UnknownStateLabel: return "UnknownStateLabel";
    case ErrorKind::MissingValue: return "MissingValue";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NotCliqueDecomposable: return "NotCliqueDecomposable";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::InsufficientNegatives: return "InsufficientNegatives";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace bnscore
