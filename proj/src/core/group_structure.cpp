#include <algorithm>
#include <string>

#include "gsparse/core.hpp"
#include "gsparse/error.hpp"

namespace gsparse {

const IndexSet& GroupStructure::group(int j) const {
  if (j < 0 || j >= num_groups()) {
    throw Error(ErrorKind::kBadGroupId,
                "group id " + std::to_string(j) + " not in [0, " + std::to_string(num_groups()) + ")");
  }
  return groups_[static_cast<std::size_t>(j)];
}

GroupStructure make_group_structure(int n, std::vector<IndexSet> groups) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "ambient dimension must be positive");
  if (groups.empty()) throw Error(ErrorKind::kEmptyGroup, "at least one group is required");

  GroupStructure result;
  result.n_ = n;
  result.owner_.assign(static_cast<std::size_t>(n), -1);
  result.m_max_ = 0;
  result.m_min_ = n + 1;

  for (std::size_t j = 0; j < groups.size(); ++j) {
    auto& group = groups[j];
    if (group.empty()) {
      throw Error(ErrorKind::kEmptyGroup, "group " + std::to_string(j) + " is empty");
    }
    std::sort(group.begin(), group.end());
    for (int index : group) {
      if (index < 0 || index >= n) {
        throw Error(ErrorKind::kIndexOutOfRange,
                    "index " + std::to_string(index) + " outside [0, " + std::to_string(n) + ")");
      }
      auto& owner = result.owner_[static_cast<std::size_t>(index)];
      if (owner != -1) {
        throw Error(ErrorKind::kOverlap, "index " + std::to_string(index) + " appears in groups " +
                                             std::to_string(owner) + " and " + std::to_string(j));
      }
      owner = static_cast<int>(j);
    }
    const int size = static_cast<int>(group.size());
    result.m_max_ = std::max(result.m_max_, size);
    result.m_min_ = std::min(result.m_min_, size);
  }

  const auto uncovered = std::find(result.owner_.begin(), result.owner_.end(), -1);
  if (uncovered != result.owner_.end()) {
    throw Error(ErrorKind::kCoverage,
                "index " + std::to_string(uncovered - result.owner_.begin()) + " is in no group");
  }
  result.groups_ = std::move(groups);
  return result;
}

GroupStructure singleton_groups(int n) {
  std::vector<IndexSet> groups;
  groups.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) groups.push_back({i});
  return make_group_structure(n, std::move(groups));
}

GroupStructure uniform_groups(int n, int group_size) {
  if (group_size < 1 || n < 1 || n % group_size != 0) {
    throw Error(ErrorKind::kInvalidArgument, "group size " + std::to_string(group_size) +
                                                 " does not divide n = " + std::to_string(n));
  }
  std::vector<IndexSet> groups;
  for (int start = 0; start < n; start += group_size) {
    IndexSet group;
    for (int i = start; i < start + group_size; ++i) group.push_back(i);
    groups.push_back(std::move(group));
  }
  return make_group_structure(n, std::move(groups));
}

void require_dimension(const Vector& x, const GroupStructure& groups) {
  if (x.size() != groups.n()) {
    throw Error(ErrorKind::kDimensionMismatch, "vector has length " + std::to_string(x.size()) +
                                                   ", group structure has n = " +
                                                   std::to_string(groups.n()));
  }
}

}  // namespace gsparse
