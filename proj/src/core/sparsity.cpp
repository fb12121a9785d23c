#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gsparse/core.hpp"
#include "gsparse/error.hpp"

namespace gsparse {

namespace {

void require_order(int k, int n) {
  if (k < 1 || k > n) {
    throw Error(ErrorKind::kInvalidArgument,
                "sparsity order k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
}

IndexSet complement(const IndexSet& kept, int n) {
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  for (int i : kept) in[static_cast<std::size_t>(i)] = true;
  IndexSet rest;
  for (int i = 0; i < n; ++i) {
    if (!in[static_cast<std::size_t>(i)]) rest.push_back(i);
  }
  return rest;
}

double restricted_lp(const Vector& x, const IndexSet& indices, double p) {
  Vector part(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t i = 0; i < indices.size(); ++i) part(static_cast<Eigen::Index>(i)) = x(indices[i]);
  return lp_norm(part, p);
}

}  // namespace

SparsityIndexResult sparsity_index(const Vector& x, int k, double p) {
  const int n = static_cast<int>(x.size());
  require_order(k, n);
  IndexSet order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(x(a)) > std::abs(x(b)); });

  SparsityIndexResult result;
  result.witness.assign(order.begin(), order.begin() + k);
  std::sort(result.witness.begin(), result.witness.end());
  result.value = restricted_lp(x, complement(result.witness, n), p);
  return result;
}

SparsityIndexResult group_sparsity_index(const Vector& x, int k, const GroupStructure& groups,
                                         IndexNorm norm) {
  require_dimension(x, groups);
  require_order(k, groups.n());

  const int g = groups.num_groups();
  std::vector<double> value(static_cast<std::size_t>(g));
  for (int j = 0; j < g; ++j) {
    double mass = 0.0;
    for (int i : groups.group(j)) mass += norm == IndexNorm::kL1 ? std::abs(x(i)) : x(i) * x(i);
    value[static_cast<std::size_t>(j)] = mass;
  }

  // best[j][c]: largest retained mass using groups j..g-1 with capacity c.
  const auto width = static_cast<std::size_t>(k) + 1;
  std::vector<double> best((static_cast<std::size_t>(g) + 1) * width, 0.0);
  auto at = [&](int j, int c) -> double& {
    return best[static_cast<std::size_t>(j) * width + static_cast<std::size_t>(c)];
  };
  for (int j = g - 1; j >= 0; --j) {
    const int weight = groups.group_size(j);
    for (int c = 0; c <= k; ++c) {
      double keep = at(j + 1, c);
      if (weight <= c) keep = std::max(keep, value[static_cast<std::size_t>(j)] + at(j + 1, c - weight));
      at(j, c) = keep;
    }
  }

  SparsityIndexResult result;
  int capacity = k;
  for (int j = 0; j < g; ++j) {
    const int weight = groups.group_size(j);
    if (weight <= capacity &&
        value[static_cast<std::size_t>(j)] + at(j + 1, capacity - weight) >= at(j, capacity)) {
      result.witness_groups.push_back(j);
      const auto& members = groups.group(j);
      result.witness.insert(result.witness.end(), members.begin(), members.end());
      capacity -= weight;
    }
  }
  std::sort(result.witness.begin(), result.witness.end());
  result.value = restricted_lp(x, complement(result.witness, groups.n()),
                               norm == IndexNorm::kL1 ? 1.0 : 2.0);
  return result;
}

namespace {

struct GksSearch {
  const GroupStructure& groups;
  int k;
  const EnumerationLimits& limits;
  std::vector<int> suffix_size;  // total size of groups j..g-1
  std::vector<int> chosen;
  std::vector<GroupKSparseSet> out;

  void visit(int j, int size, int min_excluded) {
    const int g = groups.num_groups();
    const int room = k - size;
    if (room - suffix_size[static_cast<std::size_t>(j)] >= min_excluded) {
      return;  // an excluded group will always still fit: no maximal completion
    }
    if (j == g) {
      if (room < min_excluded) emit(size);
      return;
    }
    const int weight = groups.group_size(j);
    if (weight <= room) {
      chosen.push_back(j);
      visit(j + 1, size + weight, min_excluded);
      chosen.pop_back();
    }
    visit(j + 1, size, std::min(min_excluded, weight));
  }

  void emit(int size) {
    if (out.size() >= limits.max_supports) {
      throw Error(ErrorKind::kEnumerationLimit,
                  "more than " + std::to_string(limits.max_supports) + " group k-sparse supports");
    }
    GroupKSparseSet set;
    set.member_groups = chosen;
    set.budget = k;
    set.indices.reserve(static_cast<std::size_t>(size));
    for (int j : chosen) {
      const auto& members = groups.group(j);
      set.indices.insert(set.indices.end(), members.begin(), members.end());
    }
    std::sort(set.indices.begin(), set.indices.end());
    out.push_back(std::move(set));
  }
};

}  // namespace

std::vector<GroupKSparseSet> enumerate_gks(const GroupStructure& groups, int k,
                                           const EnumerationLimits& limits) {
  if (k < 1) throw Error(ErrorKind::kInvalidArgument, "sparsity order must be positive");
  if (groups.num_groups() > limits.max_groups) {
    throw Error(ErrorKind::kEnumerationLimit, std::to_string(groups.num_groups()) +
                                                  " groups exceeds the enumeration limit of " +
                                                  std::to_string(limits.max_groups));
  }
  const int g = groups.num_groups();
  GksSearch search{groups, k, limits, std::vector<int>(static_cast<std::size_t>(g) + 1, 0), {}, {}};
  for (int j = g - 1; j >= 0; --j) {
    search.suffix_size[static_cast<std::size_t>(j)] =
        search.suffix_size[static_cast<std::size_t>(j) + 1] + groups.group_size(j);
  }
  search.visit(0, 0, groups.n() + 1);
  return std::move(search.out);
}

bool is_group_k_sparse(const Vector& x, int k, const GroupStructure& groups) {
  require_dimension(x, groups);
  int needed = 0;
  for (int j = 0; j < groups.num_groups(); ++j) {
    const auto& members = groups.group(j);
    if (std::any_of(members.begin(), members.end(), [&](int i) { return x(i) != 0.0; })) {
      needed += static_cast<int>(members.size());
    }
  }
  return needed <= k;
}

}  // namespace gsparse
