#include "gsparse/error.hpp"

namespace gsparse {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kOverlap: return "overlap-error";
    case ErrorKind::kCoverage: return "coverage-error";
    case ErrorKind::kEmptyGroup: return "empty-group-error";
    case ErrorKind::kIndexOutOfRange: return "index-out-of-range";
    case ErrorKind::kBadGroupId: return "bad-group-id";
    case ErrorKind::kDimensionMismatch: return "dimension-mismatch";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kEnumerationLimit: return "enumeration-limit-exceeded";
    case ErrorKind::kHypothesisViolated: return "hypothesis-violated";
    case ErrorKind::kRecursionGuard: return "recursion-depth-guard";
    case ErrorKind::kNonIntegerOrder: return "non-integer-order";
    case ErrorKind::kInvalidCertificate: return "invalid-certificate";
    case ErrorKind::kInfeasible: return "infeasible-system";
    case ErrorKind::kNumericalFailure: return "numerical-failure";
    case ErrorKind::kParse: return "parse-error";
    case ErrorKind::kIo: return "io-error";
  }
  return "unknown-error";
}

}  // namespace gsparse
