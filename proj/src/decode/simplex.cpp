#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "gsparse/decode.hpp"
#include "gsparse/error.hpp"

namespace gsparse {

namespace {

constexpr int kDegenerateRunBeforeBland = 50;
constexpr int kReinvertEvery = 64;

// Rows 0..m-1 hold the constraints with the right-hand side in the last
// column; row m holds reduced costs (objective value negated in the last
// column).
class Tableau {
 public:
  Tableau(Matrix body, std::vector<int> basis) : t_(std::move(body)), basis_(std::move(basis)) {}

  Eigen::Index rows() const { return t_.rows() - 1; }
  Eigen::Index cols() const { return t_.cols() - 1; }
  double& at(Eigen::Index i, Eigen::Index j) { return t_(i, j); }
  double rhs(Eigen::Index i) const { return t_(i, t_.cols() - 1); }
  double reduced_cost(Eigen::Index j) const { return t_(t_.rows() - 1, j); }
  double objective() const { return -t_(t_.rows() - 1, t_.cols() - 1); }
  std::vector<int>& basis() { return basis_; }

  void price(const Vector& cost) {
    const Eigen::Index m = rows();
    t_.row(m).setZero();
    t_.row(m).head(cost.size()) = cost.transpose();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double cb = cost(basis_[static_cast<std::size_t>(i)]);
      if (cb != 0.0) t_.row(m) -= cb * t_.row(i);
    }
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == row) continue;
      const double factor = t_(i, col);
      if (factor != 0.0) t_.row(i) -= factor * t_.row(row);
    }
    t_.col(col).setZero();
    t_(row, col) = 1.0;
    basis_[static_cast<std::size_t>(row)] = static_cast<int>(col);
  }

  void drop_row(Eigen::Index row) {
    const Eigen::Index last = t_.rows() - 1;
    Matrix kept(t_.rows() - 1, t_.cols());
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i <= last; ++i) {
      if (i != row) kept.row(k++) = t_.row(i);
    }
    t_ = std::move(kept);
    basis_.erase(basis_.begin() + row);
  }

 private:
  Matrix t_;
  std::vector<int> basis_;
};

enum class PhaseOutcome { kOptimal, kUnbounded, kIterationLimit };

struct Phase {
  const LpOptions& options;
  Eigen::Index allowed_cols;
  int& iterations;
  // Called every kReinvertEvery pivots to rebuild the tableau from the
  // original data; may be empty.
  std::function<void(Tableau&)> reinvert;

  PhaseOutcome run(Tableau& tab) {
    int degenerate_run = 0;
    bool bland = false;
    int since_reinvert = 0;
    while (true) {
      if (iterations >= options.max_iterations) return PhaseOutcome::kIterationLimit;
      Eigen::Index enter = -1;
      double best = -options.optimality_tolerance;
      for (Eigen::Index j = 0; j < allowed_cols; ++j) {
        const double rc = tab.reduced_cost(j);
        if (rc < best) {
          enter = j;
          if (bland) break;
          best = rc;
        }
      }
      if (enter < 0) return PhaseOutcome::kOptimal;

      Eigen::Index leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < tab.rows(); ++i) {
        const double coef = tab.at(i, enter);
        if (coef <= options.pivot_tolerance) continue;
        const double candidate = std::max(tab.rhs(i), 0.0) / coef;
        if (candidate < ratio ||
            (candidate == ratio && tab.basis()[static_cast<std::size_t>(i)] <
                                       tab.basis()[static_cast<std::size_t>(leave)])) {
          ratio = candidate;
          leave = i;
        }
      }
      if (leave < 0) return PhaseOutcome::kUnbounded;

      tab.pivot(leave, enter);
      ++iterations;
      degenerate_run = ratio == 0.0 ? degenerate_run + 1 : 0;
      if (degenerate_run > kDegenerateRunBeforeBland) bland = true;
      if (reinvert && ++since_reinvert >= kReinvertEvery) {
        reinvert(tab);
        since_reinvert = 0;
      }
    }
  }
};

}  // namespace

LpResult solve_standard_lp(const Matrix& a_in, const Vector& b_in, const Vector& c,
                           const LpOptions& options) {
  const Eigen::Index m = a_in.rows();
  const Eigen::Index n = a_in.cols();
  if (b_in.size() != m || c.size() != n) {
    throw Error(ErrorKind::kDimensionMismatch, "LP data dimensions disagree");
  }

  Matrix a = a_in;
  Vector b = b_in;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b(i) < 0.0) {
      a.row(i) *= -1.0;
      b(i) = -b(i);
    }
  }

  LpResult result;
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());

  // Phase 1 on [A | I | b] with the artificials basic.
  Matrix body = Matrix::Zero(m + 1, n + m + 1);
  body.topLeftCorner(m, n) = a;
  body.block(0, n, m, m).setIdentity();
  body.col(n + m).head(m) = b;
  std::vector<int> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = static_cast<int>(n + i);
  Tableau tab(std::move(body), std::move(basis));

  Vector phase1_cost = Vector::Zero(n + m);
  phase1_cost.tail(m).setOnes();
  tab.price(phase1_cost);
  Phase phase1{options, n + m, result.iterations, {}};
  if (phase1.run(tab) == PhaseOutcome::kIterationLimit) return result;
  if (tab.objective() > 1e-9 * scale) {
    result.status = LpStatus::kInfeasible;
    return result;
  }

  // Drive artificials out; rows where that is impossible are redundant.
  std::vector<Eigen::Index> kept_rows;
  for (Eigen::Index i = 0; i < m; ++i) kept_rows.push_back(i);
  for (Eigen::Index i = tab.rows() - 1; i >= 0; --i) {
    if (tab.basis()[static_cast<std::size_t>(i)] < n) continue;
    Eigen::Index col = -1;
    double largest = options.pivot_tolerance;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(tab.at(i, j)) > largest) {
        largest = std::abs(tab.at(i, j));
        col = j;
      }
    }
    if (col >= 0) {
      tab.pivot(i, col);
    } else {
      tab.drop_row(i);
      kept_rows.erase(kept_rows.begin() + i);
    }
  }

  const auto r = static_cast<Eigen::Index>(kept_rows.size());
  Matrix a_kept(r, n);
  Vector b_kept(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    a_kept.row(i) = a.row(kept_rows[static_cast<std::size_t>(i)]);
    b_kept(i) = b(kept_rows[static_cast<std::size_t>(i)]);
  }

  // Phase 2 works on the original columns only; the tableau is rebuilt from
  // (a_kept, b_kept) whenever it is reinverted.
  auto rebuild = [&](Tableau& current) {
    const auto& bas = current.basis();
    Matrix basis_matrix(r, r);
    for (Eigen::Index i = 0; i < r; ++i) basis_matrix.col(i) = a_kept.col(bas[static_cast<std::size_t>(i)]);
    Eigen::PartialPivLU<Matrix> lu(basis_matrix);
    Matrix fresh = Matrix::Zero(r + 1, n + 1);
    fresh.topLeftCorner(r, n) = lu.solve(a_kept);
    fresh.col(n).head(r) = lu.solve(b_kept);
    current = Tableau(std::move(fresh), bas);
    current.price(c);
  };

  Matrix phase2_body = Matrix::Zero(r + 1, n + 1);
  Tableau tab2(std::move(phase2_body), tab.basis());
  rebuild(tab2);

  Phase phase2{options, n, result.iterations, rebuild};
  PhaseOutcome outcome = phase2.run(tab2);
  // Re-verify optimality on a freshly inverted tableau.
  for (int attempt = 0; outcome == PhaseOutcome::kOptimal && attempt < 3; ++attempt) {
    rebuild(tab2);
    Eigen::Index before = result.iterations;
    outcome = phase2.run(tab2);
    if (result.iterations == before) break;
  }
  if (outcome == PhaseOutcome::kUnbounded) {
    result.status = LpStatus::kUnbounded;
    return result;
  }
  if (outcome == PhaseOutcome::kIterationLimit) return result;

  result.status = LpStatus::kOptimal;
  result.basis = tab2.basis();
  result.x = Vector::Zero(n);
  for (Eigen::Index i = 0; i < r; ++i) {
    result.x(result.basis[static_cast<std::size_t>(i)]) = std::max(0.0, tab2.rhs(i));
  }
  result.objective = c.dot(result.x);
  result.max_residual = m > 0 ? (a * result.x - b).cwiseAbs().maxCoeff() : 0.0;
  return result;
}

}  // namespace gsparse
