#include <cmath>
#include <set>

#include "gsparse/certify.hpp"
#include "gsparse/decomposition.hpp"
#include "gsparse/error.hpp"

namespace gsparse {

Theorem1Witness theorem1_witness(const Vector& h, int k, double t, const GroupStructure& groups) {
  require_dimension(h, groups);
  if (!(t > 1.0)) throw Error(ErrorKind::kInvalidArgument, "t must exceed 1");
  const int tk = integral_order(t, k);

  Theorem1Witness w;
  w.lambda0 = group_sparsity_index(h, k, groups, IndexNorm::kL1);
  w.h0 = restrict_to(h, w.lambda0.witness);
  const Vector tail = h - w.h0;
  w.tail_l1 = tail.cwiseAbs().sum();

  const double budget = k * (t - 1.0) / groups.m_max();  // k (t - 1) / m_max
  w.alpha = w.tail_l1 / budget;

  IndexSet large, small;
  for (int j = 0; j < groups.num_groups(); ++j) {
    const auto& members = groups.group(j);
    if (l1_mass(tail, members) > w.alpha) {
      w.large_groups.push_back(j);
      large.insert(large.end(), members.begin(), members.end());
    } else {
      w.small_groups.push_back(j);
      small.insert(small.end(), members.begin(), members.end());
    }
  }
  w.h1 = restrict_to(tail, large);
  w.h2 = restrict_to(tail, small);
  w.r = static_cast<int>(w.large_groups.size());
  w.s = budget - w.r;

  const double tol = 1e-12 * std::max(1.0, w.tail_l1);
  w.split_ok = (w.h1 + w.h2 - tail).cwiseAbs().maxCoeff() == 0.0;
  w.r_bound_ok = w.r <= budget + 1e-12;
  w.h2_l1_ok = w.h2.cwiseAbs().sum() <= w.s * w.alpha + tol;
  w.h2_group_cap_ok = true;
  for (int j = 0; j < groups.num_groups(); ++j) {
    if (l1_mass(w.h2, groups.group(j)) > w.alpha + tol) w.h2_group_cap_ok = false;
  }

  const double s_rounded = std::round(w.s);
  const bool h2_nonzero = w.h2.cwiseAbs().maxCoeff() > 0.0;
  if (std::abs(w.s - s_rounded) <= 1e-9 && s_rounded >= 1.0 && h2_nonzero && w.alpha > 0.0) {
    w.decomposition_run = true;
    try {
      const auto dec = polytope_decompose(w.h2, w.alpha, static_cast<int>(s_rounded), groups);
      w.decomposition_ok = check_decomposition(dec, groups).passed();

      std::set<int> base(w.lambda0.witness_groups.begin(), w.lambda0.witness_groups.end());
      base.insert(w.large_groups.begin(), w.large_groups.end());
      for (const auto& atom : dec.atoms) {
        std::set<int> used = base;
        for (int j : group_support(atom, groups)) used.insert(j);
        int covered = 0;
        for (int j : used) covered += groups.group_size(j);
        if (covered > tk) w.decomposition_ok = false;
      }
    } catch (const Error&) {
      w.decomposition_ok = false;
    }
  }
  return w;
}

}  // namespace gsparse
