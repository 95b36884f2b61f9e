#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace nc {

enum class ErrorCode {
  Syntax,
  NonIntegerExponent,
  ExpNotVanishing,
  ZeroPolynomial,
  DivisionByZero,
  IncompatibleFields,
  NegativeBase,
  EmptyReducedSupport,
  UnboundedDistance,
  NoSecondDerivativeOnEdge,
  MaxDepthExceeded,
  TruncationInsufficient,
  DegenerateInput,
  BranchNotSimple,
  ExtensionTooLarge,
  InvariantViolation,
  InvalidArgument,
  MultiplicityNotDecreasing,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::optional<std::size_t> offset = std::nullopt)
      : std::runtime_error(message), code_(code), offset_(offset) {}

  ErrorCode code() const { return code_; }
  std::optional<std::size_t> offset() const { return offset_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> offset_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace nc
