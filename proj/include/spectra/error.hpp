#pragma once

#include <stdexcept>
#include <string>

namespace spectra {

enum class ErrorKind {
  ContainmentViolation,
  NotChainCompatible,
  WitnessFailure,
  JacobiViolation,
  NotClosed,
  IntegralNotClosed,
  PreconditionViolation,
  ValidationError,
  ParseError,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ContainmentViolation: return "ContainmentViolation";
    case ErrorKind::NotChainCompatible: return "NotChainCompatible";
    case ErrorKind::WitnessFailure: return "WitnessFailure";
    case ErrorKind::JacobiViolation: return "JacobiViolation";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::IntegralNotClosed: return "IntegralNotClosed";
    case ErrorKind::PreconditionViolation: return "PreconditionViolation";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace spectra
