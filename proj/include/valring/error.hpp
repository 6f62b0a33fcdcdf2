#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace valring {

enum class ErrorCode {
  MalformedDescriptor,
  NotIrreducible,
  NotEisenstein,
  InsufficientPrecision,
  NotIntegral,
  FieldMismatch,
  DivisionByZero,
  CriterionFails,
  NotExact,
  Unsupported,
  NotUnit,
  BaseSetInapplicable,
  TooLarge,
  NoDecomposition,
  ResidueNotCovered,
  BadParameter,
  MissingScanFixture,
  MethodInapplicable,
  InvalidPlan,
  SyntaxError,
  ScopeError,
  MissingBinding,
  Undecided,
};

std::string_view error_code_name(ErrorCode code);

// Every domain failure in the library is reported through this type; the
// code is what callers (and the CLI exit-code mapping) switch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parser failures carry the byte offset of the offending token.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t position)
      : Error(ErrorCode::SyntaxError, message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace valring
