#pragma once

// Brute-force reference implementations. They share no code with the
// library beyond Eigen's basic matrix arithmetic.

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline double pnorm(const std::vector<double>& values, double p) {
  double sum = 0.0;
  for (double v : values) sum += std::pow(std::abs(v), p);
  return std::pow(sum, 1.0 / p);
}

// Calls f(mask) for every subset mask of {0, ..., n-1}.
template <class F>
void for_each_subset(int n, F&& f) {
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) f(mask);
}

// min over |S| <= k of ||x_{S^c}||_p.
inline double sparsity_index(const VectorXd& x, int k, double p) {
  const int n = static_cast<int>(x.size());
  double best = std::numeric_limits<double>::infinity();
  for_each_subset(n, [&](unsigned long mask) {
    if (__builtin_popcountl(mask) > k) return;
    std::vector<double> rest;
    for (int i = 0; i < n; ++i) {
      if (!(mask >> i & 1ul)) rest.push_back(x(i));
    }
    best = std::min(best, pnorm(rest, p));
  });
  return best;
}

// min over group subsets with total size <= k of the l1 or l2 norm of the
// complement, by 2^g enumeration.
inline double group_sparsity_index(const VectorXd& x, int k, const std::vector<std::vector<int>>& groups,
                                   bool l2) {
  const int g = static_cast<int>(groups.size());
  double best = std::numeric_limits<double>::infinity();
  for_each_subset(g, [&](unsigned long mask) {
    int size = 0;
    for (int j = 0; j < g; ++j) {
      if (mask >> j & 1ul) size += static_cast<int>(groups[j].size());
    }
    if (size > k) return;
    std::vector<double> rest;
    for (int j = 0; j < g; ++j) {
      if (mask >> j & 1ul) continue;
      for (int i : groups[j]) rest.push_back(x(i));
    }
    best = std::min(best, pnorm(rest, l2 ? 2.0 : 1.0));
  });
  return best;
}

// Cyclic Jacobi eigenvalues of a symmetric matrix.
inline std::vector<double> jacobi_eigenvalues(MatrixXd a) {
  const int n = static_cast<int>(a.rows());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    }
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int r = 0; r < n; ++r) {
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = c * arp - s * arq;
          a(r, q) = s * arp + c * arq;
        }
        for (int r = 0; r < n; ++r) {
          const double apr = a(p, r);
          const double aqr = a(q, r);
          a(p, r) = c * apr - s * aqr;
          a(q, r) = s * apr + c * aqr;
        }
      }
    }
  }
  std::vector<double> eig(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

inline double isometry_deviation(const MatrixXd& a, const std::vector<int>& cols) {
  if (cols.empty()) return 0.0;
  MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = a.col(cols[c]);
  const auto eig = jacobi_eigenvalues(sub.transpose() * sub);
  return std::max(1.0 - eig.front(), eig.back() - 1.0);
}

// Worst deviation over every (not only maximal) union of groups with total
// size <= k.
inline double grip(const MatrixXd& a, int k, const std::vector<std::vector<int>>& groups) {
  const int g = static_cast<int>(groups.size());
  double worst = 0.0;
  for_each_subset(g, [&](unsigned long mask) {
    std::vector<int> cols;
    for (int j = 0; j < g; ++j) {
      if (mask >> j & 1ul) cols.insert(cols.end(), groups[j].begin(), groups[j].end());
    }
    if (cols.empty() || static_cast<int>(cols.size()) > k) return;
    worst = std::max(worst, isometry_deviation(a, cols));
  });
  return worst;
}

inline double rip(const MatrixXd& a, int k) {
  std::vector<std::vector<int>> singles;
  for (int i = 0; i < a.cols(); ++i) singles.push_back({i});
  return grip(a, k, singles);
}

// Basis pursuit by vertex enumeration: an optimum of min ||z||_1, Az = y is
// attained at a basic solution, so scan every m-column basis.
inline double bp_vertex_objective(const MatrixXd& a, const VectorXd& y) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) pick[static_cast<std::size_t>(i)] = i;
  while (true) {
    MatrixXd sub(m, m);
    for (int c = 0; c < m; ++c) sub.col(c) = a.col(pick[static_cast<std::size_t>(c)]);
    Eigen::FullPivLU<MatrixXd> lu(sub);
    if (lu.rank() == m) {
      const VectorXd z = lu.solve(y);
      if ((sub * z - y).norm() <= 1e-10 * std::max(1.0, y.norm())) best = std::min(best, z.lpNorm<1>());
    }
    int pos = m - 1;
    while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == n - m + pos) --pos;
    if (pos < 0) break;
    ++pick[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < m; ++i) pick[static_cast<std::size_t>(i)] = pick[static_cast<std::size_t>(i - 1)] + 1;
  }
  return best;
}

// min ||z||_1 s.t. ||Az - y||_2 <= eps with a log-barrier Newton method on
// z = u - v, u, v > 0. Returns the objective; the duality gap at exit is
// below (2n + 1) / t_final.
inline double bpdn_barrier_objective(const MatrixXd& a, const VectorXd& y, double eps) {
  const int n = static_cast<int>(a.cols());
  const VectorXd z0 = a.completeOrthogonalDecomposition().solve(y);
  VectorXd u = z0.cwiseMax(0.0).array() + 1.0;
  VectorXd v = (-z0).cwiseMax(0.0).array() + 1.0;
  {
    // Start strictly feasible: shrink toward the least-squares point.
    const VectorXd r = a * (u - v) - y;
    if (r.squaredNorm() >= eps * eps) {
      u = z0.cwiseMax(0.0).array() + 1e-3;
      v = (-z0).cwiseMax(0.0).array() + 1e-3;
    }
  }
  const MatrixXd ata = a.transpose() * a;
  auto phi = [&](const VectorXd& uu, const VectorXd& vv, double t, bool& ok) {
    ok = (uu.array() > 0).all() && (vv.array() > 0).all();
    if (!ok) return 0.0;
    const double slack = eps * eps - (a * (uu - vv) - y).squaredNorm();
    if (slack <= 0) {
      ok = false;
      return 0.0;
    }
    return t * (uu.sum() + vv.sum()) - uu.array().log().sum() - vv.array().log().sum() - std::log(slack);
  };
  for (double t = 1.0; t < 1e13; t *= 8.0) {
    for (int it = 0; it < 200; ++it) {
      const VectorXd r = a * (u - v) - y;
      const double slack = eps * eps - r.squaredNorm();
      const VectorXd gz = 2.0 * a.transpose() * r / slack;  // gradient of -log(slack) wrt z
      VectorXd grad(2 * n);
      grad.head(n) = t * VectorXd::Ones(n) - u.cwiseInverse() + gz;
      grad.tail(n) = t * VectorXd::Ones(n) - v.cwiseInverse() - gz;
      const MatrixXd hz = 2.0 * ata / slack + gz * gz.transpose();
      MatrixXd hess(2 * n, 2 * n);
      hess.topLeftCorner(n, n) = hz;
      hess.topRightCorner(n, n) = -hz;
      hess.bottomLeftCorner(n, n) = -hz;
      hess.bottomRightCorner(n, n) = hz;
      hess.diagonal().head(n) += u.cwiseInverse().cwiseAbs2();
      hess.diagonal().tail(n) += v.cwiseInverse().cwiseAbs2();
      const VectorXd step = -hess.ldlt().solve(grad);
      const double decrement = -grad.dot(step);
      if (decrement / 2.0 < 1e-14) break;
      bool ok = false;
      const double f0 = phi(u, v, t, ok);
      double s = 1.0;
      while (s > 1e-20) {
        const VectorXd un = u + s * step.head(n);
        const VectorXd vn = v + s * step.tail(n);
        const double f1 = phi(un, vn, t, ok);
        if (ok && f1 <= f0 - 0.25 * s * decrement) {
          u = un;
          v = vn;
          break;
        }
        s *= 0.5;
      }
      if (s <= 1e-20) break;
    }
    if ((2.0 * n + 1.0) / t < 1e-11) break;
  }
  return (u - v).lpNorm<1>();
}

}  // namespace oracle
