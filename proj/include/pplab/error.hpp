#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pplab {

enum class ErrorCode {
  // pseudo-polynomials
  EmptyTermList,
  DuplicateExponent,
  NonPositiveCoefficient,
  ExponentBelowOne,
  NoNonIntegralExponent,
  MissingPolynomialPart,
  MissingPseudoPart,
  PrecisionUnrepresentable,
  AmbiguousFloor,
  DomainError,
  // exponents
  DegenerateDegrees,
  OutOfRange,
  JOutOfClaimRange,
  // primes and arithmetic functions
  LimitTooLarge,
  // diophantine approximation
  PrecisionExhausted,
  WindowViolation,
  // exponential sums
  RangeTooLong,
  PrimeTableTooSmall,
  SpecInvalid,
  HOutOfRange,
  BadParameters,
  // experiments
  HypothesisViolated,
  WitnessNotFound,
  NotFoundWithinLimit,
  DegenerateFit,
  PreconditionFailed,
  // command line
  UnknownFlag,
  MalformedPolynomial,
  MalformedNumber,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyTermList: return "EmptyTermList";
    case ErrorCode::DuplicateExponent: return "DuplicateExponent";
    case ErrorCode::NonPositiveCoefficient: return "NonPositiveCoefficient";
    case ErrorCode::ExponentBelowOne: return "ExponentBelowOne";
    case ErrorCode::NoNonIntegralExponent: return "NoNonIntegralExponent";
    case ErrorCode::MissingPolynomialPart: return "MissingPolynomialPart";
    case ErrorCode::MissingPseudoPart: return "MissingPseudoPart";
    case ErrorCode::PrecisionUnrepresentable: return "PrecisionUnrepresentable";
    case ErrorCode::AmbiguousFloor: return "AmbiguousFloor";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DegenerateDegrees: return "DegenerateDegrees";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::JOutOfClaimRange: return "JOutOfClaimRange";
    case ErrorCode::LimitTooLarge: return "LimitTooLarge";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::WindowViolation: return "WindowViolation";
    case ErrorCode::RangeTooLong: return "RangeTooLong";
    case ErrorCode::PrimeTableTooSmall: return "PrimeTableTooSmall";
    case ErrorCode::SpecInvalid: return "SpecInvalid";
    case ErrorCode::HOutOfRange: return "HOutOfRange";
    case ErrorCode::BadParameters: return "BadParameters";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::WitnessNotFound: return "WitnessNotFound";
    case ErrorCode::NotFoundWithinLimit: return "NotFoundWithinLimit";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::UnknownFlag: return "UnknownFlag";
    case ErrorCode::MalformedPolynomial: return "MalformedPolynomial";
    case ErrorCode::MalformedNumber: return "MalformedNumber";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// CLI maps them onto process exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace pplab
