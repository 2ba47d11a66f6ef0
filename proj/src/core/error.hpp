#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace densilab {

// Stable across the C boundary: values are mirrored by dl_status in densilab.h.
enum class ErrorCode : int {
  NotSymmetric = 1,
  NotExpansive = 2,
  NotPositive = 3,
  SingularMatrix = 4,
  BadParameter = 5,
  DegenerateWindow = 6,
  NotInvariant = 7,
  NotExpanding = 8,
  WrongDeterminant = 9,
  WrongSign = 10,
  BadRow = 11,
  NotUnimodular = 12,
  PreconditionViolated = 13,
  ParseError = 14,
  Internal = 15,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace densilab
