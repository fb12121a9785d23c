#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/Cholesky>

#include "gsparse/decode.hpp"
#include "gsparse/error.hpp"

namespace gsparse {

namespace {

void require_problem(const SensingMatrix& a, const Vector& y) {
  if (y.size() != a.rows()) {
    throw Error(ErrorKind::kDimensionMismatch, "measurement has length " + std::to_string(y.size()) +
                                                   ", matrix has " + std::to_string(a.rows()) + " rows");
  }
  if (!y.allFinite()) throw Error(ErrorKind::kInvalidArgument, "measurement has non-finite entries");
}

double gap_of(const Matrix& a, const Vector& z, const Vector& y, double eps) {
  return std::max(0.0, (a * z - y).norm() - eps);
}

Vector soft_threshold(const Vector& v, double level) {
  return v.unaryExpr([level](double x) {
    if (x > level) return x - level;
    if (x < -level) return x + level;
    return 0.0;
  });
}

// Given the support and signs of a candidate, solves
//   min s'z_S  s.t.  ||A_S z_S - y||_2 = eps
// in closed form and accepts it only if the KKT conditions hold: signs are
// reproduced and the dual (y - Az) / kappa has |A_j' u| <= 1 off the support.
std::optional<Vector> polish(const Matrix& a, const Vector& y, double eps, const Vector& z) {
  IndexSet support;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (z(i) != 0.0) support.push_back(static_cast<int>(i));
  }
  const auto s = static_cast<Eigen::Index>(support.size());
  if (s == 0 || s > a.rows()) return std::nullopt;

  Matrix as(a.rows(), s);
  Vector signs(s);
  for (Eigen::Index j = 0; j < s; ++j) {
    as.col(j) = a.col(support[static_cast<std::size_t>(j)]);
    signs(j) = z(support[static_cast<std::size_t>(j)]) > 0.0 ? 1.0 : -1.0;
  }
  const Matrix gram = as.transpose() * as;
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Vector z_ls = llt.solve(as.transpose() * y);
  const double r_ls = (as * z_ls - y).squaredNorm();
  const double room = eps * eps - r_ls;
  if (!(room > 0.0)) return std::nullopt;
  const Vector w = llt.solve(signs);
  const double q = signs.dot(w);
  if (!(q > 0.0)) return std::nullopt;
  const double kappa = std::sqrt(room / q);
  const Vector zs = z_ls - kappa * w;
  for (Eigen::Index j = 0; j < s; ++j) {
    if (!(zs(j) * signs(j) > 0.0)) return std::nullopt;
  }

  Vector candidate = Vector::Zero(z.size());
  for (Eigen::Index j = 0; j < s; ++j) candidate(support[static_cast<std::size_t>(j)]) = zs(j);
  const Vector dual = (y - a * candidate) / kappa;
  const Vector correlation = a.transpose() * dual;
  std::vector<bool> on(static_cast<std::size_t>(z.size()), false);
  for (int i : support) on[static_cast<std::size_t>(i)] = true;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (!on[static_cast<std::size_t>(i)] && std::abs(correlation(i)) > 1.0 + 1e-9) return std::nullopt;
  }
  return candidate;
}

DecodeResult finish(const Matrix& a, const Vector& y, double eps, Vector z, int iterations,
                    bool converged, DecodeMethod method) {
  DecodeResult result;
  result.objective = z.cwiseAbs().sum();
  result.feasibility_gap = gap_of(a, z, y, eps);
  result.xhat = std::move(z);
  result.iterations = iterations;
  result.converged = converged;
  result.method = method;
  return result;
}

}  // namespace

double gram_spectral_radius(const Matrix& a, double tolerance) {
  const auto n = a.cols();
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = 1.0 + 0.01 * static_cast<double>(i % 7);
  v.normalize();
  double estimate = 0.0;
  for (int iter = 0; iter < 100'000; ++iter) {
    Vector next = a.transpose() * (a * v);
    const double norm = next.norm();
    if (norm == 0.0) return 0.0;
    next /= norm;
    const bool settled = std::abs(norm - estimate) <= tolerance * norm;
    estimate = norm;
    v = std::move(next);
    if (settled) break;
  }
  return estimate;
}

DecodeResult decode_bp(const SensingMatrix& sensing, const Vector& y) {
  require_problem(sensing, y);
  const Matrix& a = sensing.entries();
  const auto m = a.rows();
  const auto n = a.cols();
  if (y.cwiseAbs().maxCoeff() == 0.0) {
    return finish(a, y, 0.0, Vector::Zero(n), 0, true, DecodeMethod::kLpExact);
  }

  Matrix split(m, 2 * n);
  split << a, -a;
  const LpResult lp = solve_standard_lp(split, y, Vector::Ones(2 * n));
  if (lp.status == LpStatus::kInfeasible) {
    throw Error(ErrorKind::kInfeasible, "y is not in the range of A (phase 1 residual > 0)");
  }
  if (lp.status != LpStatus::kOptimal) {
    throw Error(ErrorKind::kNumericalFailure, "simplex stopped after " + std::to_string(lp.iterations) +
                                                  " pivots without an optimal basis");
  }
  Vector z = lp.x.head(n) - lp.x.tail(n);
  DecodeResult result = finish(a, y, 0.0, std::move(z), lp.iterations, true, DecodeMethod::kLpExact);
  const double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
  if (result.feasibility_gap > 1e-8 * scale) {
    throw Error(ErrorKind::kNumericalFailure,
                "basic solution misses Az = y by " + std::to_string(result.feasibility_gap) +
                    "; basis is ill-conditioned");
  }
  result.converged = true;
  return result;
}

DecodeResult decode_bpdn(const SensingMatrix& sensing, const Vector& y, double eps,
                         const ProximalOptions& options) {
  require_problem(sensing, y);
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorKind::kInvalidArgument, "eps must be positive and finite");
  }
  const Matrix& a = sensing.entries();
  const auto n = a.cols();
  if (y.norm() <= eps) return finish(a, y, eps, Vector::Zero(n), 0, true, DecodeMethod::kProximal);

  const double lipschitz = std::sqrt(gram_spectral_radius(a, options.power_tolerance));
  const double step = 0.99 / lipschitz;  // primal and dual steps, step^2 ||A||^2 < 1

  Vector z = Vector::Zero(n);
  Vector u = Vector::Zero(a.rows());
  double last_objective = std::numeric_limits<double>::infinity();

  Vector best = z;
  double best_gap = gap_of(a, z, y, eps);
  double best_objective = 0.0;

  int iter = 0;
  while (iter < options.max_iterations) {
    const Vector z_next = soft_threshold(z - step * (a.transpose() * u), step);
    const Vector z_bar = 2.0 * z_next - z;
    const Vector v = u + step * (a * z_bar);
    // prox of the conjugate of the ball indicator (Moreau identity)
    Vector centered = v / step - y;
    const double radius = centered.norm();
    if (radius > eps) centered *= eps / radius;
    u = v - step * (y + centered);
    z = z_next;
    ++iter;

    if (iter % options.check_every != 0) continue;
    const double objective = z.cwiseAbs().sum();
    const double gap = gap_of(a, z, y, eps);
    const bool feasible = gap <= options.feasibility_tolerance;
    if ((feasible && (best_gap > options.feasibility_tolerance || objective < best_objective)) ||
        (!feasible && gap < best_gap)) {
      best = z;
      best_gap = gap;
      best_objective = objective;
    }
    if (options.polish) {
      if (auto refined = polish(a, y, eps, z)) {
        return finish(a, y, eps, std::move(*refined), iter, true, DecodeMethod::kProximal);
      }
    }
    if (feasible && std::abs(last_objective - objective) < options.objective_tolerance) {
      return finish(a, y, eps, z, iter, true, DecodeMethod::kProximal);
    }
    last_objective = objective;
  }
  return finish(a, y, eps, std::move(best), iter, false, DecodeMethod::kProximal);
}

DecodeResult decode(const RecoveryProblem& problem) {
  if (!(problem.eps >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "eps must be nonnegative");
  if (problem.eps == 0.0) return decode_bp(problem.a, problem.y);
  return decode_bpdn(problem.a, problem.y, problem.eps);
}

std::vector<double> residual_norms(const Vector& xhat, const Vector& x_true,
                                   const std::vector<double>& p_list) {
  if (xhat.size() != x_true.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "residual needs vectors of equal length");
  }
  const Vector h = xhat - x_true;
  std::vector<double> out;
  out.reserve(p_list.size());
  for (double p : p_list) {
    if (!(p >= 1.0 && p <= 2.0)) {
      throw Error(ErrorKind::kInvalidArgument, "residual norm order must lie in [1, 2], got " + std::to_string(p));
    }
    out.push_back(lp_norm(h, p));
  }
  return out;
}

}  // namespace gsparse
