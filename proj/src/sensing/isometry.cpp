#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>

#include "gsparse/error.hpp"
#include "gsparse/random.hpp"
#include "gsparse/sensing.hpp"

namespace gsparse {

std::pair<double, double> gram_eigen_range(const Matrix& a, const IndexSet& support) {
  if (support.empty()) return {1.0, 1.0};
  const auto s = static_cast<Eigen::Index>(support.size());
  Matrix columns(a.rows(), s);
  for (Eigen::Index j = 0; j < s; ++j) columns.col(j) = a.col(support[static_cast<std::size_t>(j)]);
  const Matrix gram = columns.transpose() * columns;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::kNumericalFailure, "Gram eigenvalue computation did not converge");
  }
  const auto& values = solver.eigenvalues();  // ascending
  return {values(0), values(s - 1)};
}

namespace {

struct Partial {
  double delta = -1.0;
  std::size_t arg = 0;
  double eigen_min = std::numeric_limits<double>::infinity();
  double eigen_max = -std::numeric_limits<double>::infinity();
};

Partial scan(const Matrix& a, const std::vector<GroupKSparseSet>& supports, std::size_t begin,
             std::size_t end) {
  Partial part;
  for (std::size_t i = begin; i < end; ++i) {
    const auto [lo, hi] = gram_eigen_range(a, supports[i].indices);
    part.eigen_min = std::min(part.eigen_min, lo);
    part.eigen_max = std::max(part.eigen_max, hi);
    const double delta = std::max(1.0 - lo, hi - 1.0);
    if (delta > part.delta) {
      part.delta = delta;
      part.arg = i;
    }
  }
  return part;
}

IsometryReport reduce(const Matrix& a, const std::vector<GroupKSparseSet>& supports, int workers) {
  const std::size_t count = supports.size();
  const std::size_t chunks = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1,
                                                     std::max<std::size_t>(count, 1));
  std::vector<Partial> parts(chunks);
  auto bounds = [&](std::size_t c) { return std::pair{count * c / chunks, count * (c + 1) / chunks}; };
  if (chunks == 1) {
    parts[0] = scan(a, supports, 0, count);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t c = 0; c < chunks; ++c) {
      pool.emplace_back([&, c] {
        const auto [b, e] = bounds(c);
        parts[c] = scan(a, supports, b, e);
      });
    }
  }

  IsometryReport report;
  Partial total;
  for (const auto& part : parts) {  // chunk order keeps the first maximizer
    total.eigen_min = std::min(total.eigen_min, part.eigen_min);
    total.eigen_max = std::max(total.eigen_max, part.eigen_max);
    if (part.delta > total.delta) {
      total.delta = part.delta;
      total.arg = part.arg;
    }
  }
  if (count == 0) return report;
  report.eigen_min = total.eigen_min;
  report.eigen_max = total.eigen_max;
  report.delta = std::max({0.0, 1.0 - total.eigen_min, total.eigen_max - 1.0});
  report.extremal_support = supports[total.arg].indices;
  report.supports_tested = count;
  return report;
}

void require_columns(const SensingMatrix& a, const GroupStructure& groups) {
  if (a.cols() != groups.n()) {
    throw Error(ErrorKind::kDimensionMismatch, "matrix has " + std::to_string(a.cols()) +
                                                   " columns, group structure has n = " +
                                                   std::to_string(groups.n()));
  }
}

}  // namespace

IsometryReport grip_constant(const SensingMatrix& a, int k, const GroupStructure& groups,
                             const IsometryOptions& options) {
  require_columns(a, groups);
  if (k < 1 || k > groups.n()) {
    throw Error(ErrorKind::kInvalidArgument, "isometry order must lie in [1, n]");
  }
  const auto supports = enumerate_gks(groups, k, options.limits);
  IsometryReport report = reduce(a.entries(), supports, options.workers);
  report.order = k;
  report.kind = IsometryKind::kGrip;
  report.exact = true;
  return report;
}

IsometryReport rip_constant(const SensingMatrix& a, int k, const IsometryOptions& options) {
  const int n = a.cols();
  if (k < 1 || k > n) throw Error(ErrorKind::kInvalidArgument, "isometry order must lie in [1, n]");
  // C(n, k) computed incrementally; stops as soon as the guard is exceeded.
  double count = 1.0;
  for (int i = 1; i <= k; ++i) {
    count = count * static_cast<double>(n - k + i) / static_cast<double>(i);
    if (count > static_cast<double>(options.limits.max_supports) * 1.0000001) {
      throw Error(ErrorKind::kEnumerationLimit, "C(" + std::to_string(n) + ", " + std::to_string(k) +
                                                    ") exceeds " +
                                                    std::to_string(options.limits.max_supports));
    }
  }
  IsometryOptions singleton = options;
  singleton.limits.max_groups = std::max(options.limits.max_groups, n);
  IsometryReport report = grip_constant(a, k, singleton_groups(n), singleton);
  report.kind = IsometryKind::kRip;
  return report;
}

IsometryReport grip_lower_bound(const SensingMatrix& a, int k, const GroupStructure& groups,
                                int trials, std::uint64_t seed) {
  require_columns(a, groups);
  if (k < 1 || k > groups.n()) {
    throw Error(ErrorKind::kInvalidArgument, "isometry order must lie in [1, n]");
  }
  if (trials < 1) throw Error(ErrorKind::kInvalidArgument, "trials must be positive");

  SplitMix64 rng(seed);
  const int g = groups.num_groups();
  std::vector<int> order(static_cast<std::size_t>(g));
  std::vector<GroupKSparseSet> supports;
  supports.reserve(static_cast<std::size_t>(trials));
  for (int trial = 0; trial < trials; ++trial) {
    std::iota(order.begin(), order.end(), 0);
    for (int i = g - 1; i > 0; --i) {
      const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    GroupKSparseSet set;
    set.budget = k;
    int room = k;
    for (int j : order) {
      if (groups.group_size(j) <= room) {
        set.member_groups.push_back(j);
        room -= groups.group_size(j);
      }
    }
    std::sort(set.member_groups.begin(), set.member_groups.end());
    for (int j : set.member_groups) {
      const auto& members = groups.group(j);
      set.indices.insert(set.indices.end(), members.begin(), members.end());
    }
    std::sort(set.indices.begin(), set.indices.end());
    supports.push_back(std::move(set));
  }
  IsometryReport report = reduce(a.entries(), supports, 1);
  report.order = k;
  report.kind = IsometryKind::kGrip;
  report.exact = false;
  return report;
}

}  // namespace gsparse
