#pragma once

#include <vector>

#include "gsparse/core.hpp"
#include "gsparse/sensing.hpp"

namespace gsparse {

// ---------------------------------------------------------------------------
// Dense two-phase simplex for   min c'x  s.t.  Ax = b, x >= 0.
// ---------------------------------------------------------------------------

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpResult {
  LpStatus status = LpStatus::kIterationLimit;
  Vector x;
  double objective = 0.0;
  std::vector<int> basis;  // basic column per retained row
  int iterations = 0;
  double max_residual = 0.0;  // ||Ax - b||_inf after refinement
};

struct LpOptions {
  double pivot_tolerance = 1e-9;
  double optimality_tolerance = 1e-10;
  int max_iterations = 50'000;
};

// Dantzig pricing with a switch to Bland's rule after a run of degenerate
// pivots. The final basic solution is recomputed from the original data by
// an LU solve, so the returned x does not carry tableau round-off.
LpResult solve_standard_lp(const Matrix& a, const Vector& b, const Vector& c,
                           const LpOptions& options = {});

// ---------------------------------------------------------------------------
// l1 decoders
// ---------------------------------------------------------------------------

struct RecoveryProblem {
  SensingMatrix a;
  Vector y;
  double eps = 0.0;
};

enum class DecodeMethod { kLpExact, kProximal };

struct DecodeResult {
  Vector xhat;
  double objective = 0.0;        // ||xhat||_1
  double feasibility_gap = 0.0;  // max(0, ||A xhat - y||_2 - eps)
  int iterations = 0;
  bool converged = false;
  DecodeMethod method = DecodeMethod::kLpExact;
};

// Basis pursuit: min ||z||_1 s.t. Az = y, as an LP in (z+, z-). Throws
// kInfeasible when y is not in the range of A.
DecodeResult decode_bp(const SensingMatrix& a, const Vector& y);

struct ProximalOptions {
  int max_iterations = 200'000;
  int check_every = 100;
  double objective_tolerance = 1e-10;  // decrease per check window
  double feasibility_tolerance = 1e-8;
  double power_tolerance = 1e-10;
  bool polish = true;  // active-set KKT refinement at every check
};

// Basis pursuit denoising: min ||z||_1 s.t. ||Az - y||_2 <= eps, eps > 0,
// by primal-dual proximal splitting (soft-thresholding on z, projection
// onto the eps-ball around y in measurement space). Not converging is not
// an error: the best iterate is returned with converged = false.
DecodeResult decode_bpdn(const SensingMatrix& a, const Vector& y, double eps,
                         const ProximalOptions& options = {});

// eps == 0 goes to decode_bp, eps > 0 to decode_bpdn.
DecodeResult decode(const RecoveryProblem& problem);

// ||xhat - x_true||_p for each p in [1, 2].
std::vector<double> residual_norms(const Vector& xhat, const Vector& x_true,
                                   const std::vector<double>& p_list);

// Largest eigenvalue of A'A by power iteration.
double gram_spectral_radius(const Matrix& a, double tolerance = 1e-10);

}  // namespace gsparse
