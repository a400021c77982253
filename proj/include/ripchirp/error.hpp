#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ripchirp {

enum class ErrorCode {
  NoPrimeInInterval,
  RangeTooLarge,
  DegenerateSet,
  Overflow,
  CapacityExceeded,
  ModulusMismatch,
  ZeroInB,
  SizeOrderViolated,
  NoConvergence,
  NoFeasibleM,
  InvalidEps0,
  InvalidArgument,
  IndexOutOfRange,
  DuplicateIndex,
  NotHermitian,
  TooManySupports,
  OverlappingSets,
  Format,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoPrimeInInterval: return "NoPrimeInInterval";
    case ErrorCode::RangeTooLarge: return "RangeTooLarge";
    case ErrorCode::DegenerateSet: return "DegenerateSet";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::ModulusMismatch: return "ModulusMismatch";
    case ErrorCode::ZeroInB: return "ZeroInB";
    case ErrorCode::SizeOrderViolated: return "SizeOrderViolated";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NoFeasibleM: return "NoFeasibleM";
    case ErrorCode::InvalidEps0: return "InvalidEps0";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DuplicateIndex: return "DuplicateIndex";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::TooManySupports: return "TooManySupports";
    case ErrorCode::OverlappingSets: return "OverlappingSets";
    case ErrorCode::Format: return "Format";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Library-wide exception; `code()` identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ripchirp
