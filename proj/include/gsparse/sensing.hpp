#pragma once

#include <cstdint>
#include <string>

#include "gsparse/core.hpp"

namespace gsparse {

struct Provenance {
  std::string generator = "explicit";
  std::uint64_t seed = 0;
  std::string normalization = "none";

  bool operator==(const Provenance&) const = default;
};

// Dense m x n measurement matrix. Entries must be finite.
class SensingMatrix {
 public:
  explicit SensingMatrix(Matrix entries, Provenance provenance = {});

  int rows() const { return static_cast<int>(entries_.rows()); }
  int cols() const { return static_cast<int>(entries_.cols()); }
  const Matrix& entries() const { return entries_; }
  const Provenance& provenance() const { return provenance_; }

  bool operator==(const SensingMatrix& other) const {
    return entries_ == other.entries_ && provenance_ == other.provenance_;
  }

 private:
  Matrix entries_;
  Provenance provenance_;
};

// I.i.d. N(0, 1/m) entries, filled row-major from one splitmix64/Box-Muller
// stream seeded with `seed`.
SensingMatrix gaussian_matrix(int m, int n, std::uint64_t seed);

// sqrt(n/m) times m orthonormal rows (Gram-Schmidt of a Gaussian draw from
// the same stream as gaussian_matrix). Requires m <= n. Columns have unit
// expected squared norm and the nonzero singular values all equal sqrt(n/m).
SensingMatrix orthonormal_rows_matrix(int m, int n, std::uint64_t seed);

enum class IsometryKind { kRip, kGrip };

struct IsometryReport {
  int order = 0;
  double delta = 0.0;
  IsometryKind kind = IsometryKind::kGrip;
  bool exact = true;
  IndexSet extremal_support;
  double eigen_min = 1.0;
  double eigen_max = 1.0;
  std::size_t supports_tested = 0;
};

struct IsometryOptions {
  EnumerationLimits limits;
  int workers = 1;  // results are bitwise independent of this
};

// Exact GRIP constant of order k: worst Gram-eigenvalue deviation from 1
// over every inclusion-maximal group k-sparse support.
IsometryReport grip_constant(const SensingMatrix& a, int k, const GroupStructure& groups,
                             const IsometryOptions& options = {});

// Exact RIP constant of order k (all-singleton groups). Guarded by
// C(n, k) <= options.limits.max_supports.
IsometryReport rip_constant(const SensingMatrix& a, int k, const IsometryOptions& options = {});

// Monte-Carlo lower bound from `trials` random maximal group k-sparse
// supports (random greedy fill over a shuffled group order).
IsometryReport grip_lower_bound(const SensingMatrix& a, int k, const GroupStructure& groups,
                                int trials, std::uint64_t seed);

// Extreme eigenvalues of the Gram matrix of the columns in `support`.
std::pair<double, double> gram_eigen_range(const Matrix& a, const IndexSet& support);

}  // namespace gsparse
