#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stabfin {

enum class ErrorCode {
  InvalidSpec,
  InvalidTable,
  NonCentralElement,
  InfiniteGroup,
  Unsupported,
  UnsupportedGroup,
  NotAUnit,
  RingMismatch,
  NotPrime,
  Mismatch,
  ShapeMismatch,
  NotOneSidedPair,
  BudgetExceeded,
  NotUnitriangular,
  NotCongruentModP,
  NotLeftInverse,
  ShapeViolation,
  NonAbelianBase,
  NotBasic,
  NotSurjective,
  NotLinearAlphabet,
  BaseEmbeddingUnavailable,
  Overflow,
  ParseError,
  UsageError,
  IOError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace stabfin
