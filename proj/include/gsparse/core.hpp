#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace gsparse {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Coordinates are 0-based throughout the library; the JSON layer converts
// to and from the 1-based convention used in files.
using IndexSet = std::vector<int>;

// A partition of {0, ..., n-1} into nonempty, pairwise disjoint groups.
// Group order is preserved as given; indices inside a group are sorted.
class GroupStructure {
 public:
  int n() const { return n_; }
  int num_groups() const { return static_cast<int>(groups_.size()); }
  const std::vector<IndexSet>& groups() const { return groups_; }
  const IndexSet& group(int j) const;
  int group_size(int j) const { return static_cast<int>(group(j).size()); }
  int m_max() const { return m_max_; }
  int m_min() const { return m_min_; }
  // Group id holding coordinate `index`.
  int group_of(int index) const { return owner_.at(static_cast<std::size_t>(index)); }

  bool operator==(const GroupStructure& other) const {
    return n_ == other.n_ && groups_ == other.groups_;
  }

  friend GroupStructure make_group_structure(int n, std::vector<IndexSet> groups);

 private:
  GroupStructure() = default;

  int n_ = 0;
  std::vector<IndexSet> groups_;
  std::vector<int> owner_;
  int m_max_ = 0;
  int m_min_ = 0;
};

// Validates the partition. Throws kOverlap, kCoverage, kEmptyGroup or
// kIndexOutOfRange.
GroupStructure make_group_structure(int n, std::vector<IndexSet> groups);

GroupStructure singleton_groups(int n);

// Consecutive blocks of `group_size`; `group_size` must divide n.
GroupStructure uniform_groups(int n, int group_size);

// Guards for exhaustive enumeration of group k-sparse supports.
struct EnumerationLimits {
  int max_groups = 24;
  std::size_t max_supports = 1'000'000;
};

// Lambda = G_S for a set S of group ids, with |Lambda| <= budget.
struct GroupKSparseSet {
  std::vector<int> member_groups;
  IndexSet indices;
  int budget = 0;

  bool operator==(const GroupKSparseSet&) const = default;
};

struct SparsityIndexResult {
  double value = 0.0;
  IndexSet witness;                 // the retained support Lambda_0
  std::vector<int> witness_groups;  // group ids forming the witness (group index only)
};

enum class IndexNorm { kL1, kL2 };

// x on G_j, zero elsewhere.
Vector group_project(const Vector& x, const GroupStructure& groups, int j);

// x on `indices`, zero elsewhere.
Vector restrict_to(const Vector& x, const IndexSet& indices);

// p in [1, inf]; pass std::numeric_limits<double>::infinity() for the max norm.
double lp_norm(const Vector& x, double p);

// l1 mass of x over one index set.
double l1_mass(const Vector& x, const IndexSet& indices);

// Sum of per-group Euclidean norms, unweighted by group size.
double gl_norm(const Vector& x, const GroupStructure& groups);

// Sum over groups of (1 - w) * l1 + w * l2, w in [0, 1].
double sgl_norm(const Vector& x, const GroupStructure& groups, double w);

// Conventional k-sparsity index: lp norm of x after removing its k largest
// magnitudes. Magnitude ties keep the lowest index.
SparsityIndexResult sparsity_index(const Vector& x, int k, double p);

// Group k-sparsity index, solved exactly as a 0/1 knapsack over groups
// (weights |G_j|, capacity k). Among optimal group subsets, groups are
// admitted greedily in increasing id order, so the witness is the
// lexicographically smallest maximal optimal subset.
SparsityIndexResult group_sparsity_index(const Vector& x, int k, const GroupStructure& groups,
                                         IndexNorm norm);

// All inclusion-maximal group k-sparse sets, in lexicographic order of the
// member-group sequence.
std::vector<GroupKSparseSet> enumerate_gks(const GroupStructure& groups, int k,
                                           const EnumerationLimits& limits = {});

bool is_group_k_sparse(const Vector& x, int k, const GroupStructure& groups);

// Throws kDimensionMismatch unless x.size() == groups.n().
void require_dimension(const Vector& x, const GroupStructure& groups);

}  // namespace gsparse
