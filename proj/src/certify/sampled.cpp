#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <Eigen/SVD>

#include "gsparse/certify.hpp"
#include "gsparse/error.hpp"
#include "gsparse/random.hpp"

namespace gsparse {

namespace {

constexpr double kRelativeSlack = 1e-12;

// Orthonormal basis of the null space of a (n x d, possibly d = 0).
Matrix null_space_basis(const Matrix& a) {
  const auto n = a.cols();
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  const double cutoff = std::max(a.rows(), a.cols()) * std::numeric_limits<double>::epsilon() * top;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

bool violates(double lhs, double rhs) { return lhs > rhs + kRelativeSlack * std::max(lhs, rhs); }

double ratio_of(double lhs, double rhs) {
  if (rhs > 0.0) return lhs / rhs;
  return lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

GrnspCheck evaluate(const Vector& h, double ah, const IndexSet& support, int k, double rho,
                    double tau, std::vector<bool>& in_support) {
  const double root_k = std::sqrt(static_cast<double>(k));
  GrnspCheck check;
  double in_sq = 0.0;
  std::fill(in_support.begin(), in_support.end(), false);
  for (int i : support) {
    check.lhs_l1 += std::abs(h(i));
    in_sq += h(i) * h(i);
    in_support[static_cast<std::size_t>(i)] = true;
  }
  double out_l1 = 0.0;
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    if (!in_support[static_cast<std::size_t>(i)]) out_l1 += std::abs(h(i));
  }
  check.lhs_l2 = std::sqrt(in_sq);
  check.rhs_l2 = rho / root_k * out_l1 + tau / root_k * ah;
  check.rhs_l1 = rho * out_l1 + tau * ah;
  check.l2_holds = !violates(check.lhs_l2, check.rhs_l2);
  check.l1_holds = !violates(check.lhs_l1, check.rhs_l1);
  return check;
}

GrnspSampleReport sample_range(const Matrix& a, const Matrix& null_basis,
                               const std::vector<GroupKSparseSet>& supports, int k, double rho,
                               double tau, std::uint64_t seed, int begin, int end) {
  const auto n = a.cols();
  GrnspSampleReport report;
  std::vector<bool> in_support(static_cast<std::size_t>(n));

  for (int trial = begin; trial < end; ++trial) {
    SplitMix64 rng(seed + static_cast<std::uint64_t>(trial));
    Vector h(n);
    for (auto& value : h) value = rng.normal();
    if (trial % 2 == 1 && null_basis.cols() > 0) {
      Vector other(n);
      for (auto& value : other) value = rng.normal();
      const Vector kernel_part = null_basis * (null_basis.transpose() * h);
      const Vector range_part = other - null_basis * (null_basis.transpose() * other);
      const double leak = std::pow(10.0, -6.0 * rng.uniform());
      h = kernel_part + leak * range_part;
    }
    const double ah = (a * h).norm();

    bool trial_ok = true;
    for (const auto& support : supports) {
      const GrnspCheck check = evaluate(h, ah, support.indices, k, rho, tau, in_support);
      ++report.checks;
      if (!check.l2_holds) ++report.violations;
      if (!check.l1_holds) ++report.l1_violations;
      if (!check.l1_holds && check.l2_holds) ++report.l1_without_l2;
      if (!check.l2_holds) trial_ok = false;

      const double ratio = ratio_of(check.lhs_l2, check.rhs_l2);
      if (ratio > report.worst_ratio) {
        report.worst_ratio = ratio;
        report.worst_support = support.indices;
        if (!check.l2_holds) {
          report.worst_h = h;
        } else {
          report.worst_h.reset();
        }
      }
    }
    if (trial_ok) ++report.passing_trials;
  }
  report.trials = end - begin;
  return report;
}

}  // namespace

GrnspCheck evaluate_grnsp(const Matrix& a, const Vector& h, const IndexSet& support, int k,
                          double rho, double tau) {
  if (h.size() != a.cols()) throw Error(ErrorKind::kDimensionMismatch, "h does not match A");
  if (k < 1) throw Error(ErrorKind::kInvalidArgument, "k must be positive");
  std::vector<bool> in_support(static_cast<std::size_t>(h.size()));
  return evaluate(h, (a * h).norm(), support, k, rho, tau, in_support);
}

GrnspSampleReport grnsp_holds_sampled(const SensingMatrix& a, int k, const GroupStructure& groups,
                                      double rho, double tau, const GrnspSampling& sampling) {
  if (a.cols() != groups.n()) {
    throw Error(ErrorKind::kDimensionMismatch, "matrix columns do not match the group structure");
  }
  if (k < 1 || k > groups.n()) throw Error(ErrorKind::kInvalidArgument, "k must lie in [1, n]");
  if (sampling.trials < 0) throw Error(ErrorKind::kInvalidArgument, "trials must be nonnegative");

  const auto supports = enumerate_gks(groups, k, sampling.limits);
  const Matrix null_basis = null_space_basis(a.entries());

  const int workers = std::clamp(sampling.workers, 1, std::max(sampling.trials, 1));
  std::vector<GrnspSampleReport> parts(static_cast<std::size_t>(workers));
  auto bounds = [&](int c) {
    return std::pair{static_cast<int>(static_cast<long long>(sampling.trials) * c / workers),
                     static_cast<int>(static_cast<long long>(sampling.trials) * (c + 1) / workers)};
  };
  auto work = [&](int c) {
    const auto [b, e] = bounds(c);
    parts[static_cast<std::size_t>(c)] =
        sample_range(a.entries(), null_basis, supports, k, rho, tau, sampling.seed, b, e);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (int c = 0; c < workers; ++c) pool.emplace_back(work, c);
  }

  GrnspSampleReport total;
  for (auto& part : parts) {
    total.trials += part.trials;
    total.checks += part.checks;
    total.violations += part.violations;
    total.l1_violations += part.l1_violations;
    total.l1_without_l2 += part.l1_without_l2;
    total.passing_trials += part.passing_trials;
    if (part.worst_ratio > total.worst_ratio) {
      total.worst_ratio = part.worst_ratio;
      total.worst_support = std::move(part.worst_support);
      total.worst_h = std::move(part.worst_h);
    }
  }
  return total;
}

}  // namespace gsparse
