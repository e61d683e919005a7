#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bnscore {

enum class ErrorKind {
  CycleDetected,
  DuplicateParent,
  SelfLoop,
  InvalidVariable,
  StateOutOfRange,
  SchemaMismatch,
  IndexOutOfRange,
  SyntaxError,
  UnknownVariable,
  RowSumNotOne,
  MissingCptRow,
  HeaderMismatch,
  UnknownStateLabel,
  MissingValue,
  DomainError,
  LengthMismatch,
  NotCliqueDecomposable,
  DegenerateInput,
  InsufficientNegatives,
  IoError,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for every library failure; the kind tells callers
// (and the CLI exit-code mapping) what went wrong.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bnscore
