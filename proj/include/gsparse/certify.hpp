#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gsparse/core.hpp"
#include "gsparse/sensing.hpp"

namespace gsparse {

// mu(t) = sqrt((t - 1) t) - (t - 1), defined for t >= 4/3.
double mu_of_t(double t);

// Largest GRIP constant of order tk that certifies the l2 group robust null
// space property:
//   mu (1 - mu) / (mu^2 m_max^2 / (2 (t - 1) m_min) + 1/2 - mu + mu^2).
// With singleton groups this equals sqrt((t - 1) / t).
double delta_threshold(double t, const GroupStructure& groups);
double delta_threshold(double t, int m_max, int m_min);

struct GrnspCertificate {
  double t = 0.0;
  int k = 0;
  double delta = 0.0;  // GRIP constant of order t * k
  double mu = 0.0;
  double a_squared = 0.0;
  std::optional<double> a, b, c;
  std::optional<double> rho;  // c / a
  std::optional<double> tau;  // b sqrt(k) / a^2
  double threshold = 0.0;
  bool valid = false;
  std::string reason;  // empty when valid

  double margin() const { return threshold - delta; }
};

// Throws kNonIntegerOrder unless t * k is an integer (to 1e-9), and
// kInvalidArgument for t < 4/3 or delta outside [0, 1). A zero delta is
// accepted: it gives rho = 0.
GrnspCertificate grnsp_constants(double t, int k, double delta, const GroupStructure& groups);

// Certificate for a GRIP constant that may be >= 1: such a matrix is
// reported invalid with reason "recovery_impossible" instead of throwing.
GrnspCertificate certificate_for_delta(double t, int k, double delta, const GroupStructure& groups);

// t * k as an integer; throws kNonIntegerOrder otherwise.
int integral_order(double t, int k);

struct GrnspSampling {
  int trials = 10'000;
  std::uint64_t seed = 0;
  int workers = 1;
  EnumerationLimits limits;
};

struct GrnspSampleReport {
  int trials = 0;
  std::size_t checks = 0;           // (h, S) pairs evaluated
  std::size_t violations = 0;       // l2 inequality failures
  std::size_t l1_violations = 0;    // l1 consequence failures
  std::size_t l1_without_l2 = 0;    // l1 failed although l2 held
  int passing_trials = 0;           // trials with no violation on any S
  double worst_ratio = 0.0;         // max over (h, S) of lhs / rhs
  std::optional<Vector> worst_h;    // set when a violation exists
  IndexSet worst_support;

  bool holds() const { return violations == 0; }
};

// One evaluation of both GRNSP inequalities for a fixed (h, S).
struct GrnspCheck {
  double lhs_l2 = 0.0;  // ||h_S||_2
  double rhs_l2 = 0.0;  // rho / sqrt(k) ||h_{S^c}||_1 + tau / sqrt(k) ||A h||_2
  double lhs_l1 = 0.0;  // ||h_S||_1
  double rhs_l1 = 0.0;  // rho ||h_{S^c}||_1 + tau ||A h||_2
  bool l2_holds = true;
  bool l1_holds = true;
};

GrnspCheck evaluate_grnsp(const Matrix& a, const Vector& h, const IndexSet& support, int k,
                          double rho, double tau);

// Samples h (even trials: Gaussian; odd trials: Gaussian pulled toward the
// null space of A) and checks, for every maximal S in GkS,
//   ||h_S||_2 <= rho / sqrt(k) ||h_{S^c}||_1 + tau / sqrt(k) ||A h||_2
// and its l1 consequence ||h_S||_1 <= rho ||h_{S^c}||_1 + tau ||A h||_2.
// Trial i draws from seed + i. A violation disproves the property.
GrnspSampleReport grnsp_holds_sampled(const SensingMatrix& a, int k, const GroupStructure& groups,
                                      double rho, double tau, const GrnspSampling& sampling = {});

struct ErrorBudget {
  double sigma = 0.0;
  double eps = 0.0;
  int k = 0;
  double p = 1.0;
  double bound_l1 = 0.0;  // bound on ||h||_1
  double bound_lp = 0.0;  // bound on ||h||_p
};

// Residual bounds for the l1 decoder:
//   ||h||_1 <= 2 / (1 - rho) [(1 + rho) sigma + 2 tau eps]
//   ||h||_p <= 2 / (1 - rho) {[rho / k^(1-1/p) + 1 + rho] sigma
//                             + (1 / k^(1-1/p) + 2) tau eps}
ErrorBudget error_bounds(double rho, double tau, int k, double sigma, double eps, double p);

// Throws kInvalidCertificate unless cert.valid.
ErrorBudget error_bounds(const GrnspCertificate& cert, double sigma, double eps, double p);

// Replays the construction in the GRNSP argument for one h.
struct Theorem1Witness {
  SparsityIndexResult lambda0;   // best group k-sparse support of h (l1)
  double tail_l1 = 0.0;          // ||h_{Lambda0^c}||_1
  double alpha = 0.0;            // m_max ||h_{Lambda0^c}||_1 / (k (t - 1))
  double s = 0.0;                // k (t - 1) / m_max - r
  std::vector<int> large_groups; // S1
  std::vector<int> small_groups; // S2
  int r = 0;                     // |S1|
  Vector h0, h1, h2;

  bool split_ok = false;        // h_{Lambda0^c} == h1 + h2
  bool r_bound_ok = false;      // r <= k (t - 1) / m_max
  bool h2_l1_ok = false;        // ||h2||_1 <= s alpha
  bool h2_group_cap_ok = false; // ||h2_{G_j}||_1 <= alpha for all j
  // When s is a positive integer and h2 != 0, h2 is decomposed and every
  // atom together with h0 + h1 must be group tk-sparse.
  bool decomposition_run = false;
  bool decomposition_ok = true;

  bool passed() const {
    return split_ok && r_bound_ok && h2_l1_ok && h2_group_cap_ok && decomposition_ok;
  }
};

Theorem1Witness theorem1_witness(const Vector& h, int k, double t, const GroupStructure& groups);

}  // namespace gsparse
