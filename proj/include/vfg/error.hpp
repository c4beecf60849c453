#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vfg {

enum class ErrorKind {
  DivisionByZero,
  PrecisionLoss,
  NotIntegral,
  ZeroArgument,
  NoConvergence,
  Unsupported,
  NotElliptic,
  CharNotSupported,
  NotSmooth,
  NotInE0,
  NotDivisible,
  WrongShape,
  BadParameter,
  NormViolation,
  NotInKernel,
  NotInDomain,
  SyntaxError,
  NotOnCurve,
};

inline std::string_view kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::PrecisionLoss: return "PrecisionLoss";
    case ErrorKind::NotIntegral: return "NotIntegral";
    case ErrorKind::ZeroArgument: return "ZeroArgument";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::NotElliptic: return "NotElliptic";
    case ErrorKind::CharNotSupported: return "CharNotSupported";
    case ErrorKind::NotSmooth: return "NotSmooth";
    case ErrorKind::NotInE0: return "NotInE0";
    case ErrorKind::NotDivisible: return "NotDivisible";
    case ErrorKind::WrongShape: return "WrongShape";
    case ErrorKind::BadParameter: return "BadParameter";
    case ErrorKind::NormViolation: return "NormViolation";
    case ErrorKind::NotInKernel: return "NotInKernel";
    case ErrorKind::NotInDomain: return "NotInDomain";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::NotOnCurve: return "NotOnCurve";
  }
  return "Unknown";
}

/// Domain error raised by every module; `kind()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure; `offset()` is the 1-based byte position of the offending input.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& what)
      : Error(ErrorKind::SyntaxError, what + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace vfg
