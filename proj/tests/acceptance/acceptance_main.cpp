// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 only
// when every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gsparse/certify.hpp"
#include "gsparse/decode.hpp"
#include "gsparse/decomposition.hpp"
#include "gsparse/error.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace gsparse;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct CertifiedInstance {
  SensingMatrix a;
  double delta;
  GrnspCertificate cert;
};

constexpr int kN = 12;
constexpr int kM = 11;
constexpr int kK = 2;
constexpr double kT = 2.0;

const GroupStructure& pair_groups() {
  static const GroupStructure g = uniform_groups(kN, 2);
  return g;
}

// Shared by criteria 4 to 6.
struct InstancePool {
  std::vector<CertifiedInstance> certified;
  int drawn = 0;
  int excluded = 0;
  int gaussian_drawn = 0;  // same shape, Gaussian entries, for comparison only
  int gaussian_certified = 0;
};

const InstancePool& instance_pool() {
  static const InstancePool pool = [] {
    InstancePool p;
    const auto& groups = pair_groups();
    const double threshold = delta_threshold(kT, groups);
    for (std::uint64_t seed = 1; p.certified.size() < 20 && seed < 100'000; ++seed) {
      auto a = orthonormal_rows_matrix(kM, kN, seed);
      ++p.drawn;
      const double delta = grip_constant(a, integral_order(kT, kK), groups).delta;
      if (delta >= threshold) {
        ++p.excluded;
        continue;
      }
      auto cert = grnsp_constants(kT, kK, delta, groups);
      p.certified.push_back({std::move(a), delta, std::move(cert)});
    }
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
      const auto g = gaussian_matrix(kM, kN, seed);
      ++p.gaussian_drawn;
      if (grip_constant(g, integral_order(kT, kK), groups).delta < threshold) ++p.gaussian_certified;
    }
    return p;
  }();
  return pool;
}

Vector random_group_sparse(const std::vector<GroupKSparseSet>& gks, int n, SplitMix64& rng) {
  const auto& support = gks[rng.below(gks.size())];
  Vector x = Vector::Zero(n);
  for (int i : support.indices) x(i) = rng.normal();
  return x;
}

Vector ball_noise(int m, double eps, SplitMix64& rng) {
  Vector d = testing_support::random_normal(m, rng);
  return d * (eps * std::pow(rng.uniform(), 1.0 / m) / d.norm());
}

std::string fmt(const char* pattern, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

Outcome criterion1() {
  double worst = 0.0;
  for (double t : {4.0 / 3.0, 1.5, 2.0, 3.0, 5.0}) {
    worst = std::max(worst, std::abs(delta_threshold(t, singleton_groups(6)) - std::sqrt((t - 1) / t)));
  }
  const double at2 = delta_threshold(2.0, singleton_groups(6));
  const double mu2 = mu_of_t(2.0);
  const bool pass = worst <= 1e-12 && std::abs(at2 - 0.707) < 5e-4 && std::abs(mu2 - 0.414) < 5e-4;
  std::ostringstream s;
  s << "max |threshold - sqrt((t-1)/t)| = " << worst << " over t in {4/3,1.5,2,3,5}; t=2 gives "
    << fmt("%.6f", at2) << ", mu(2) = " << fmt("%.6f", mu2);
  return {pass, s.str()};
}

Outcome criterion2() {
  SplitMix64 rng(20'250'101);
  int failures = 0;
  double worst_recon = 0.0, worst_energy = 0.0;
  std::size_t atoms = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto in = testing_support::random_decomposition_input(30, 10, rng);
    try {
      const auto dec = polytope_decompose(in.v, in.alpha, in.s, in.groups);
      const auto check = check_decomposition(dec, in.groups);
      Vector sum = Vector::Zero(in.v.size());
      for (std::size_t i = 0; i < dec.atoms.size(); ++i) sum += dec.weights[i] * dec.atoms[i];
      const double recon = (sum - in.v).lpNorm<Eigen::Infinity>();
      worst_recon = std::max(worst_recon, recon);
      worst_energy = std::max(worst_energy, check.max_energy_ratio);
      atoms += dec.atoms.size();
      if (!check.passed() || recon > 1e-10) ++failures;
    } catch (const Error&) {
      ++failures;
    }
  }
  std::ostringstream s;
  s << "1000 inputs (n<=30, g<=10), " << failures << " failing; " << atoms << " atoms, max reconstruction error "
    << worst_recon << ", max energy ratio " << fmt("%.4f", worst_energy);
  return {failures == 0, s.str()};
}

Outcome criterion3() {
  SplitMix64 rng(31'337);
  int mismatches = 0, order_violations = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(11));
    const int m = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const auto a = gaussian_matrix(m, n, rng.next());
    const double brute = oracle::rip(a.entries(), k);
    const double grip_single = grip_constant(a, k, singleton_groups(n)).delta;
    const double diff = std::abs(grip_single - brute);
    worst = std::max(worst, diff);
    if (diff > 1e-10) ++mismatches;
    const auto groups = testing_support::random_partition(n, 1 + static_cast<int>(rng.below(n)), rng);
    if (grip_constant(a, k, groups).delta > rip_constant(a, k).delta + 1e-12) ++order_violations;
  }
  std::ostringstream s;
  s << "100 matrices (n<=12): max |GRIP_singleton - RIP_bruteforce| = " << worst << ", " << mismatches
    << " above 1e-10, " << order_violations << " cases with GRIP > RIP";
  return {mismatches == 0 && order_violations == 0, s.str()};
}

Outcome criterion4() {
  const auto& pool = instance_pool();
  std::size_t violations = 0, checks = 0;
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i < pool.certified.size(); ++i) {
    const auto& inst = pool.certified[i];
    GrnspSampling sampling;
    sampling.trials = 10'000;
    sampling.seed = 1000 * (i + 1);
    const auto r = grnsp_holds_sampled(inst.a, kK, pair_groups(), *inst.cert.rho, *inst.cert.tau, sampling);
    violations += r.violations + r.l1_violations;
    checks += r.checks;
    worst_ratio = std::max(worst_ratio, r.worst_ratio);
  }
  const double rate = pool.drawn == 0 ? 0.0 : double(pool.excluded) / pool.drawn;
  std::ostringstream s;
  s << pool.certified.size() << " certified instances (orthonormal rows, n=12, m=11, pairs, k=2, t=2), "
    << pool.excluded << " of " << pool.drawn << " excluded (exclusion rate " << fmt("%.3f", rate) << "); "
    << checks << " (h, S) checks over 10^4 samples each, " << violations << " violations, worst lhs/rhs "
    << fmt("%.4f", worst_ratio) << "; Gaussian entries at this shape certify " << pool.gaussian_certified
    << " of " << pool.gaussian_drawn;
  return {pool.certified.size() == 20 && violations == 0, s.str()};
}

Outcome criterion5() {
  const auto& pool = instance_pool();
  const auto gks = enumerate_gks(pair_groups(), kK);
  int trials = 0, successes = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < pool.certified.size(); ++i) {
    SplitMix64 rng(5000 + i);
    for (int j = 0; j < 100; ++j) {
      const Vector x = random_group_sparse(gks, kN, rng);
      const auto r = decode_bp(pool.certified[i].a, pool.certified[i].a.entries() * x);
      const double err = (r.xhat - x).norm();
      worst = std::max(worst, err);
      ++trials;
      if (err <= 1e-6) ++successes;
    }
  }
  std::ostringstream s;
  s << successes << " / " << trials << " noiseless truths recovered to l2 error <= 1e-6, worst " << worst;
  return {trials == 2000 && successes == trials, s.str()};
}

Outcome criterion6() {
  const auto& pool = instance_pool();
  if (pool.certified.empty()) return {false, "no certified instances"};
  const auto gks = enumerate_gks(pair_groups(), kK);
  const std::vector<double> ps{1.0, 1.5, 2.0};
  SplitMix64 rng(6006);
  int trials = 0, violations = 0, compressible = 0;
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto& inst = pool.certified[static_cast<std::size_t>(trial) % pool.certified.size()];
    const double eps = trial < 250 ? 0.01 : 0.1;
    Vector x = random_group_sparse(gks, kN, rng);
    if (trial % 2 == 1) {
      x += 0.02 * testing_support::random_normal(kN, rng);  // not group sparse: sigma > 0
      ++compressible;
    }
    const double sigma = group_sparsity_index(x, kK, pair_groups(), IndexNorm::kL1).value;
    const Vector y = inst.a.entries() * x + ball_noise(kM, eps, rng);
    const auto r = decode_bpdn(inst.a, y, eps);
    const auto err = residual_norms(r.xhat, x, ps);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const double bound = error_bounds(inst.cert, sigma, eps, ps[i]).bound_lp;
      worst_ratio = std::max(worst_ratio, err[i] / bound);
      if (err[i] > bound) ++violations;
    }
    ++trials;
  }
  std::ostringstream s;
  s << trials << " noisy trials (eps 0.01 and 0.1, 250 each; " << compressible << " with sigma > 0), "
    << violations << " bound violations over p in {1,1.5,2}; max err/bound " << fmt("%.4f", worst_ratio);
  return {violations == 0, s.str()};
}

Outcome criterion7() {
  SplitMix64 rng(7007);
  int mismatches = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + static_cast<int>(rng.below(10));
    const int n = m + static_cast<int>(rng.below(static_cast<std::uint64_t>(21 - m)));
    const auto a = gaussian_matrix(m, n, rng.next());
    const Vector y = a.entries() * testing_support::random_sparse_ish(n, rng);
    const double got = decode_bp(a, y).objective;
    const double expected = oracle::bp_vertex_objective(a.entries(), y);
    const double diff = std::abs(got - expected);
    worst = std::max(worst, diff);
    if (diff > 1e-8) ++mismatches;
  }

  int monotone_failures = 0, limit_failures = 0;
  double worst_limit = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 4 + static_cast<int>(rng.below(7));
    const int n = m + 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(19 - m)));
    const auto a = gaussian_matrix(m, n, rng.next());
    const Vector y = a.entries() * testing_support::random_sparse_ish(n, rng);
    const double bp = decode_bp(a, y).objective;
    double previous = std::numeric_limits<double>::infinity();
    for (double eps : {1e-6, 1e-4, 1e-2}) {
      const double obj = decode_bpdn(a, y, eps).objective;
      if (obj > previous + 1e-9) ++monotone_failures;
      previous = obj;
      if (eps == 1e-6) {
        worst_limit = std::max(worst_limit, std::abs(obj - bp));
        if (std::abs(obj - bp) > 1e-4) ++limit_failures;
      }
    }
  }
  std::ostringstream s;
  s << "decode_bp vs vertex enumeration on 200 instances (m<=10, n<=20): max |diff| = " << worst << " ("
    << mismatches << " above 1e-8); decode_bpdn on 20 instances: " << monotone_failures
    << " monotonicity failures over eps in {1e-2,1e-4,1e-6}, max |obj(1e-6) - bp| = " << worst_limit;
  return {mismatches == 0 && monotone_failures == 0 && limit_failures == 0, s.str()};
}

Outcome criterion8() {
  SplitMix64 rng(8008);
  int mismatches = 0, dominance = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int g = 1 + static_cast<int>(rng.below(12));
    const int n = g + static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * g + 1)));
    const auto groups = testing_support::random_partition(n, g, rng);
    const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const Vector x = testing_support::random_sparse_ish(n, rng);
    for (const auto norm : {IndexNorm::kL1, IndexNorm::kL2}) {
      const bool l2 = norm == IndexNorm::kL2;
      const double got = group_sparsity_index(x, k, groups, norm).value;
      const double diff = std::abs(got - oracle::group_sparsity_index(x, k, groups.groups(), l2));
      worst = std::max(worst, diff);
      if (diff > 1e-12) ++mismatches;
      if (sparsity_index(x, k, l2 ? 2.0 : 1.0).value > got + 1e-12) ++dominance;
    }
  }
  std::ostringstream s;
  s << "500 instances (g<=12), l1 and l2: max |knapsack - exhaustive| = " << worst << ", " << mismatches
    << " mismatches, " << dominance << " cases with sigma_k > sigma_k,G";
  return {mismatches == 0 && dominance == 0, s.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"threshold specialization", criterion1},  {"decomposition suite", criterion2},
      {"RIP/GRIP oracle equivalence", criterion3}, {"sampled null space property", criterion4},
      {"exact recovery", criterion5},            {"error-bound validity", criterion6},
      {"decoder oracle", criterion7},            {"knapsack index oracle", criterion8},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu %s %s: %s [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
