#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <utility>

#include "gsparse/decomposition.hpp"
#include "gsparse/error.hpp"

namespace gsparse {

GroupSupport group_support(const Vector& v, const GroupStructure& groups) {
  require_dimension(v, groups);
  GroupSupport support;
  for (int j = 0; j < groups.num_groups(); ++j) {
    const auto& members = groups.group(j);
    if (std::any_of(members.begin(), members.end(), [&](int i) { return v(i) != 0.0; })) {
      support.push_back(j);
    }
  }
  return support;
}

namespace {

constexpr double kMergeTolerance = 1e-12;

struct Term {
  double weight;
  Vector atom;
};

class Decomposer {
 public:
  Decomposer(const GroupStructure& groups, double alpha, int s, int max_depth)
      : groups_(groups), alpha_(alpha), s_(s), max_depth_(max_depth) {}

  std::vector<Term> run(const Vector& v, int depth) {
    if (depth > max_depth_) {
      throw Error(ErrorKind::kRecursionGuard,
                  "decomposition depth " + std::to_string(depth) + " exceeds " + std::to_string(max_depth_));
    }
    const GroupSupport active = group_support(v, groups_);
    const int r = static_cast<int>(active.size());
    if (r <= s_) return {Term{1.0, v}};

    // Active groups by descending l1 mass, ties by group id.
    std::vector<std::pair<double, int>> order;
    order.reserve(active.size());
    for (int j : active) order.emplace_back(l1_mass(v, groups_.group(j)), j);
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });

    // tail[i] = sum of masses at sorted positions i..r-1 (0-based).
    std::vector<double> tail(static_cast<std::size_t>(r) + 1, 0.0);
    for (int i = r - 1; i >= 0; --i) {
      tail[static_cast<std::size_t>(i)] = tail[static_cast<std::size_t>(i) + 1] + order[static_cast<std::size_t>(i)].first;
    }

    // Largest pivot in D; 0-based position `pivot` stands for beta = pivot + 1.
    int pivot = 0;
    for (int b = r - 2; b >= 0; --b) {
      if (tail[static_cast<std::size_t>(b)] <= static_cast<double>(r - 1 - b) * alpha_) {
        pivot = b;
        break;
      }
    }
    const double level = tail[static_cast<std::size_t>(pivot)] / static_cast<double>(r - 1 - pivot);

    std::vector<Term> merged;
    std::map<GroupSupport, std::vector<std::size_t>> buckets;
    double total_weight = 0.0;
    for (int t = pivot; t < r; ++t) {
      const double b_t = level - order[static_cast<std::size_t>(t)].first;
      if (!(b_t > 0.0)) continue;  // degenerate pivot boundary: zero weight
      const double lambda = b_t / level;
      total_weight += lambda;

      Vector child = Vector::Zero(v.size());
      for (int i = 0; i < r; ++i) {
        if (i == t) continue;
        const auto [mass, j] = order[static_cast<std::size_t>(i)];
        const double scale = i < pivot ? 1.0 : level / mass;
        for (int idx : groups_.group(j)) child(idx) = scale * v(idx);
      }

      for (auto& term : run(child, depth + 1)) {
        add(merged, buckets, lambda * term.weight, std::move(term.atom));
      }
    }
    if (!(total_weight > 0.0)) {
      throw Error(ErrorKind::kNumericalFailure, "all pivot weights vanished");
    }
    for (auto& term : merged) term.weight /= total_weight;
    return merged;
  }

 private:
  void add(std::vector<Term>& terms, std::map<GroupSupport, std::vector<std::size_t>>& buckets,
           double weight, Vector atom) {
    auto& slot = buckets[group_support(atom, groups_)];
    for (std::size_t index : slot) {
      if ((terms[index].atom - atom).cwiseAbs().maxCoeff() <= kMergeTolerance) {
        terms[index].weight += weight;
        return;
      }
    }
    slot.push_back(terms.size());
    terms.push_back(Term{weight, std::move(atom)});
  }

  const GroupStructure& groups_;
  double alpha_;
  int s_;
  int max_depth_;
};

}  // namespace

ConvexDecomposition polytope_decompose(const Vector& v, double alpha, int s,
                                       const GroupStructure& groups) {
  require_dimension(v, groups);
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::kInvalidArgument, "alpha must be positive and finite");
  }
  if (s < 1) throw Error(ErrorKind::kInvalidArgument, "s must be a positive integer");
  if (!v.allFinite()) throw Error(ErrorKind::kInvalidArgument, "vector has non-finite entries");

  const double slack = 1e-12 * std::max(1.0, alpha);
  for (int j = 0; j < groups.num_groups(); ++j) {
    const double mass = l1_mass(v, groups.group(j));
    if (mass > alpha + slack) {
      throw Error(ErrorKind::kHypothesisViolated,
                  "group " + std::to_string(j) + " has l1 mass " + std::to_string(mass) +
                      " > alpha = " + std::to_string(alpha) + " (excess " +
                      std::to_string(mass - alpha) + ")");
    }
  }
  const double total = v.cwiseAbs().sum();
  const double cap = static_cast<double>(s) * alpha;
  if (total > cap + 1e-12 * std::max(1.0, cap)) {
    throw Error(ErrorKind::kHypothesisViolated,
                "||v||_1 = " + std::to_string(total) + " > s * alpha = " + std::to_string(cap) +
                    " (excess " + std::to_string(total - cap) + ")");
  }

  const int active = static_cast<int>(group_support(v, groups).size());
  Decomposer decomposer(groups, alpha, s, std::max(0, active - s));
  auto terms = decomposer.run(v, 0);

  ConvexDecomposition dec;
  dec.source = v;
  dec.alpha = alpha;
  dec.s = s;
  dec.weights.reserve(terms.size());
  dec.atoms.reserve(terms.size());
  for (auto& term : terms) {
    dec.weights.push_back(term.weight);
    dec.atoms.push_back(std::move(term.atom));
  }
  return dec;
}

DecompositionCheck check_decomposition(const ConvexDecomposition& dec, const GroupStructure& groups) {
  constexpr double kTolerance = 1e-10;
  DecompositionCheck check;
  const Vector& v = dec.source;
  const double v_l1 = v.cwiseAbs().sum();
  const double norm_tolerance = kTolerance * std::max(1.0, v_l1);
  const double energy_cap = static_cast<double>(dec.s) * groups.m_max() / groups.m_min() *
                            dec.alpha * dec.alpha;
  const int sparsity_cap = dec.s * groups.m_max();

  if (dec.weights.size() != dec.atoms.size() || dec.atoms.empty()) {
    check.convex_combination = false;
  }

  Vector combination = Vector::Zero(v.size());
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < std::min(dec.weights.size(), dec.atoms.size()); ++i) {
    const double w = dec.weights[i];
    const Vector& u = dec.atoms[i];
    if (u.size() != v.size()) {
      check.convex_combination = false;
      check.support_contained = false;
      continue;
    }
    if (!(w > 0.0)) check.convex_combination = false;
    weight_sum += w;
    combination += w * u;

    for (Eigen::Index j = 0; j < v.size(); ++j) {
      if (v(j) == 0.0 && u(j) != 0.0) check.support_contained = false;
    }

    const double deviation = std::abs(u.cwiseAbs().sum() - v_l1);
    check.max_norm_deviation = std::max(check.max_norm_deviation, deviation);
    if (deviation > norm_tolerance) check.norm_preserved = false;

    int covered = 0;
    for (int j : group_support(u, groups)) covered += groups.group_size(j);
    if (covered > sparsity_cap) check.group_sparse = false;

    const double energy = u.squaredNorm();
    const double ratio = energy_cap > 0.0 ? energy / energy_cap : (energy > 0.0 ? INFINITY : 0.0);
    check.max_energy_ratio = std::max(check.max_energy_ratio, ratio);
    if (energy > energy_cap + kTolerance * std::max(1.0, energy_cap)) check.energy_bound = false;
  }

  check.weight_sum_error = std::abs(weight_sum - 1.0);
  check.reconstruction_error = v.size() > 0 ? (combination - v).cwiseAbs().maxCoeff() : 0.0;
  if (check.weight_sum_error > 1e-12 || check.reconstruction_error > kTolerance) {
    check.convex_combination = false;
  }
  return check;
}

}  // namespace gsparse
