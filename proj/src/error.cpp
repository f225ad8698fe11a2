#include "stabfin/error.hpp"

namespace stabfin {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidTable: return "InvalidTable";
    case ErrorCode::NonCentralElement: return "NonCentralElement";
    case ErrorCode::InfiniteGroup: return "InfiniteGroup";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::UnsupportedGroup: return "UnsupportedGroup";
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::RingMismatch: return "RingMismatch";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::Mismatch: return "Mismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NotOneSidedPair: return "NotOneSidedPair";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotUnitriangular: return "NotUnitriangular";
    case ErrorCode::NotCongruentModP: return "NotCongruentModP";
    case ErrorCode::NotLeftInverse: return "NotLeftInverse";
    case ErrorCode::ShapeViolation: return "ShapeViolation";
    case ErrorCode::NonAbelianBase: return "NonAbelianBase";
    case ErrorCode::NotBasic: return "NotBasic";
    case ErrorCode::NotSurjective: return "NotSurjective";
    case ErrorCode::NotLinearAlphabet: return "NotLinearAlphabet";
    case ErrorCode::BaseEmbeddingUnavailable: return "BaseEmbeddingUnavailable";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::IOError: return "IOError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace stabfin
