#include <cmath>
#include <string>

#include <Eigen/QR>

#include "gsparse/error.hpp"
#include "gsparse/random.hpp"
#include "gsparse/sensing.hpp"

namespace gsparse {

SensingMatrix::SensingMatrix(Matrix entries, Provenance provenance)
    : entries_(std::move(entries)), provenance_(std::move(provenance)) {
  if (entries_.rows() < 1 || entries_.cols() < 1) {
    throw Error(ErrorKind::kInvalidArgument, "sensing matrix must have at least one row and column");
  }
  if (!entries_.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "sensing matrix has non-finite entries");
  }
}

namespace {

Matrix standard_normal_rows(int m, int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Matrix g(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  }
  return g;
}

}  // namespace

SensingMatrix gaussian_matrix(int m, int n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw Error(ErrorKind::kInvalidArgument, "matrix dimensions must be positive");
  Matrix g = standard_normal_rows(m, n, seed) / std::sqrt(static_cast<double>(m));
  return SensingMatrix(std::move(g), Provenance{"gaussian", seed, "variance 1/m"});
}

SensingMatrix orthonormal_rows_matrix(int m, int n, std::uint64_t seed) {
  if (m < 1 || n < 1 || m > n) {
    throw Error(ErrorKind::kInvalidArgument,
                "orthonormal rows need 1 <= m <= n, got m = " + std::to_string(m) +
                    ", n = " + std::to_string(n));
  }
  const Matrix g = standard_normal_rows(m, n, seed);
  Eigen::HouseholderQR<Matrix> qr(g.transpose());
  Matrix q = qr.householderQ() * Matrix::Identity(n, m);
  // Fix column signs so that R has a positive diagonal; makes Q unique.
  const Matrix& r = qr.matrixQR();
  for (int j = 0; j < m; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  Matrix a = q.transpose() * std::sqrt(static_cast<double>(n) / static_cast<double>(m));
  return SensingMatrix(std::move(a), Provenance{"orthonormal_rows", seed, "scaled by sqrt(n/m)"});
}

}  // namespace gsparse
