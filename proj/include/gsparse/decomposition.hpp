#pragma once

#include <vector>

#include "gsparse/core.hpp"

namespace gsparse {

// Group ids j with v restricted to G_j nonzero (exact zero test), ascending.
using GroupSupport = std::vector<int>;

GroupSupport group_support(const Vector& v, const GroupStructure& groups);

// v = sum_i weights[i] * atoms[i], a convex combination of group
// (s * m_max)-sparse atoms that each carry the full l1 mass of v.
struct ConvexDecomposition {
  std::vector<double> weights;
  std::vector<Vector> atoms;
  Vector source;
  double alpha = 0.0;
  int s = 0;
};

// Constructive polytope decomposition for v with every group's l1 mass
// <= alpha and ||v||_1 <= s * alpha.
//
// While |Gsupp(v)| > s, the active groups are ordered by descending l1 mass
// a_1 >= ... >= a_r (ties by group id) and the largest pivot beta in [1, r-1]
// with sum_{i >= beta} a_i <= (r - beta) alpha is taken. With
// B = sum_{i >= beta} a_i / (r - beta), every t >= beta yields a child
//   w_t = sum_{i < beta} p_i + B * sum_{i >= beta, i != t} p_i / a_i
// of weight 1 - a_t / B, which has one active group fewer. Children are
// decomposed recursively and the nested combination is multiplied out;
// atoms that agree to 1e-12 are merged.
//
// Throws kHypothesisViolated when a cap fails (slack 1e-12), kRecursionGuard
// if the group support stops shrinking.
ConvexDecomposition polytope_decompose(const Vector& v, double alpha, int s,
                                       const GroupStructure& groups);

struct DecompositionCheck {
  bool support_contained = true;  // supp(u_i) within supp(v)
  bool norm_preserved = true;     // ||u_i||_1 == ||v||_1
  bool group_sparse = true;       // u_i group (s * m_max)-sparse
  bool convex_combination = true; // weights positive, sum to 1, reconstruct v
  bool energy_bound = true;       // ||u_i||_2^2 <= (s m_max / m_min) alpha^2

  double reconstruction_error = 0.0;  // max-norm of sum_i w_i u_i - v
  double weight_sum_error = 0.0;
  double max_norm_deviation = 0.0;
  double max_energy_ratio = 0.0;  // max_i ||u_i||_2^2 / ((s m_max / m_min) alpha^2)

  bool passed() const {
    return support_contained && norm_preserved && group_sparse && convex_combination && energy_bound;
  }
};

// Diagnostic only; never throws for a well-formed decomposition.
DecompositionCheck check_decomposition(const ConvexDecomposition& dec, const GroupStructure& groups);

}  // namespace gsparse
