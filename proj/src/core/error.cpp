#include "error.hpp"

namespace densilab {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotExpansive: return "NotExpansive";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::DegenerateWindow: return "DegenerateWindow";
    case ErrorCode::NotInvariant: return "NotInvariant";
    case ErrorCode::NotExpanding: return "NotExpanding";
    case ErrorCode::WrongDeterminant: return "WrongDeterminant";
    case ErrorCode::WrongSign: return "WrongSign";
    case ErrorCode::BadRow: return "BadRow";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace densilab
