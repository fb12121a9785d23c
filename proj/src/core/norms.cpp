#include <cmath>
#include <limits>
#include <string>

#include "gsparse/core.hpp"
#include "gsparse/error.hpp"

namespace gsparse {

Vector group_project(const Vector& x, const GroupStructure& groups, int j) {
  require_dimension(x, groups);
  return restrict_to(x, groups.group(j));
}

Vector restrict_to(const Vector& x, const IndexSet& indices) {
  Vector out = Vector::Zero(x.size());
  for (int i : indices) out(i) = x(i);
  return out;
}

double lp_norm(const Vector& x, double p) {
  if (std::isnan(p) || p < 1.0) {
    throw Error(ErrorKind::kInvalidArgument, "lp norm requires p >= 1, got " + std::to_string(p));
  }
  if (x.size() == 0) return 0.0;
  if (std::isinf(p)) return x.cwiseAbs().maxCoeff();
  if (p == 1.0) return x.cwiseAbs().sum();
  if (p == 2.0) return std::sqrt(x.squaredNorm());
  const double scale = x.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (double v : x) sum += std::pow(std::abs(v) / scale, p);
  return scale * std::pow(sum, 1.0 / p);
}

double l1_mass(const Vector& x, const IndexSet& indices) {
  double sum = 0.0;
  for (int i : indices) sum += std::abs(x(i));
  return sum;
}

namespace {

double l2_mass(const Vector& x, const IndexSet& indices) {
  double sum = 0.0;
  for (int i : indices) sum += x(i) * x(i);
  return std::sqrt(sum);
}

}  // namespace

double gl_norm(const Vector& x, const GroupStructure& groups) {
  require_dimension(x, groups);
  double total = 0.0;
  for (const auto& group : groups.groups()) total += l2_mass(x, group);
  return total;
}

double sgl_norm(const Vector& x, const GroupStructure& groups, double w) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "mixing weight must lie in [0, 1]");
  }
  require_dimension(x, groups);
  double total = 0.0;
  for (const auto& group : groups.groups()) {
    total += (1.0 - w) * l1_mass(x, group) + w * l2_mass(x, group);
  }
  return total;
}

}  // namespace gsparse
