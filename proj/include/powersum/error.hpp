#pragma once

#include <stdexcept>
#include <string>

namespace powersum {

enum class ErrorCode {
  NotPrime,
  DegreeOutOfRange,
  NoIrreducibleFound,
  FieldMismatch,
  DivisionByZero,
  NotMonic,
  NotPrimePower,
  OrderTooLarge,
  InvalidPds,
  NuOutOfRange,
  InvalidArgument,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorCode::NoIrreducibleFound: return "NoIrreducibleFound";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::NotMonic: return "NotMonic";
    case ErrorCode::NotPrimePower: return "NotPrimePower";
    case ErrorCode::OrderTooLarge: return "OrderTooLarge";
    case ErrorCode::InvalidPds: return "InvalidPds";
    case ErrorCode::NuOutOfRange: return "NuOutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace powersum
