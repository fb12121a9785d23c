#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gsparse {

enum class ErrorKind {
  kOverlap,
  kCoverage,
  kEmptyGroup,
  kIndexOutOfRange,
  kBadGroupId,
  kDimensionMismatch,
  kInvalidArgument,
  kEnumerationLimit,
  kHypothesisViolated,
  kRecursionGuard,
  kNonIntegerOrder,
  kInvalidCertificate,
  kInfeasible,
  kNumericalFailure,
  kParse,
  kIo,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type; `kind()` is stable
// and is what callers (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gsparse
