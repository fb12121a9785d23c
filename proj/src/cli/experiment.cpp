#include "gsparse/cli/experiment.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "gsparse/error.hpp"
#include "gsparse/random.hpp"

namespace gsparse::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kRecoveryTolerance = 1e-6;

// Decorrelates the truth/noise stream from the matrix stream of a trial.
constexpr std::uint64_t kTruthSalt = 0xd1b54a32d192ed03ULL;

void reject(const std::string& why) { throw Error(ErrorKind::kInvalidArgument, "config: " + why); }

template <class T>
T optional_field(const Json& j, const char* name, T fallback) {
  if (!j.contains(name) || j.at(name).is_null()) return fallback;
  try {
    return j.at(name).get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("config field '") + name + "': " + e.what());
  }
}

std::string noise_name(NoiseModel noise) { return noise == NoiseModel::kNone ? "none" : "gaussian_ball"; }

std::string csv_real(double x) { return std::isnan(x) ? "" : format_real(x); }

const char* csv_bool(bool b) { return b ? "true" : "false"; }

// Double quotes around fields that need them.
std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Vector ball_noise(int m, double eps, SplitMix64& rng) {
  if (eps == 0.0) return Vector::Zero(m);
  Vector dir(m);
  double norm = 0.0;
  while (norm == 0.0) {
    for (int i = 0; i < m; ++i) dir(i) = rng.normal();
    norm = dir.norm();
  }
  const double radius = eps * std::pow(rng.uniform(), 1.0 / m);
  return dir * (radius / norm);
}

TrialInstance draw_with(const ExperimentConfig& config, const std::vector<GroupKSparseSet>& gks, int m,
                        int n, int trial) {
  const std::uint64_t seed = trial_seed(config.seed, trial);
  SensingMatrix a = make_matrix(config.ensemble, m, n, seed);
  SplitMix64 rng(seed ^ kTruthSalt);
  const auto& support = gks[rng.below(gks.size())];
  Vector x = Vector::Zero(n);
  for (int i : support.indices) x(i) = rng.normal();
  Vector noise = config.noise == NoiseModel::kGaussianBall ? ball_noise(m, config.eps, rng) : Vector::Zero(m);
  Vector y = a.entries() * x + noise;
  return {std::move(a), std::move(x), std::move(noise), std::move(y)};
}

TrialRecord trial_with(const ExperimentConfig& config, const GroupStructure& groups,
                       const std::vector<GroupKSparseSet>& gks, int m, int trial,
                       const EnumerationLimits& limits) {
  TrialRecord rec;
  rec.trial = trial;
  rec.delta = kNaN;
  rec.threshold = delta_threshold(config.t, groups);
  const std::size_t np = config.p_list.size();
  rec.err.assign(np, kNaN);
  rec.bound.assign(np, kNaN);
  rec.bound_ok.assign(np, false);
  try {
    const auto inst = draw_with(config, gks, m, groups.n(), trial);
    std::optional<GrnspCertificate> cert;
    if (config.certify) {
      IsometryOptions opts;
      opts.limits = limits;
      rec.delta = grip_constant(inst.a, integral_order(config.t, config.k), groups, opts).delta;
      cert = certificate_for_delta(config.t, config.k, rec.delta, groups);
      rec.certified = cert->valid;
    }
    const auto result = decode(RecoveryProblem{inst.a, inst.y, config.eps});
    rec.err = residual_norms(result.xhat, inst.x, config.p_list);
    rec.success = (result.xhat - inst.x).norm() <= kRecoveryTolerance + config.eps;
    if (rec.certified) {
      const double sigma = group_sparsity_index(inst.x, config.k, groups, IndexNorm::kL1).value;
      for (std::size_t i = 0; i < np; ++i) {
        rec.bound[i] = error_bounds(*cert, sigma, config.eps, config.p_list[i]).bound_lp;
        rec.bound_ok[i] = rec.err[i] <= rec.bound[i] + kRecoveryTolerance;
      }
    }
  } catch (const std::exception& e) {
    rec.status = std::string("error: ") + e.what();
    rec.certified = false;
    rec.success = false;
  }
  return rec;
}

}  // namespace

void validate(const ExperimentConfig& c) {
  if (c.n < 1) reject("n must be positive");
  if (c.m < 1 || c.m > c.n) reject("m must lie in [1, n]");
  for (int m : c.m_list) {
    if (m < 1 || m > c.n) reject("every m in m_list must lie in [1, n]");
  }
  if (c.k < 1 || c.k > c.n) reject("k must lie in [1, n]");
  if (c.trials < 0) reject("trials must be nonnegative");
  if (!(c.eps >= 0.0) || !std::isfinite(c.eps)) reject("eps must be finite and nonnegative");
  if (c.workers < 1) reject("workers must be positive");
  if (c.ensemble != "gaussian" && c.ensemble != "orthonormal_rows") {
    reject("ensemble must be 'gaussian' or 'orthonormal_rows'");
  }
  try {
    const int tk = integral_order(c.t, c.k);
    if (c.certify && tk > c.n) reject("t * k exceeds n; set certify to false");
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kNonIntegerOrder) throw;
    throw Error(ErrorKind::kNonIntegerOrder,
                "config: t * k must be an integer (the GRIP order tk is integral), got t = " +
                    format_real(c.t) + ", k = " + std::to_string(c.k));
  }
  mu_of_t(c.t);
  for (double p : c.p_list) {
    if (!(p >= 1.0 && p <= 2.0)) reject("p_list entries must lie in [1, 2]");
  }
  if (!c.groups && (c.group_size < 1 || c.n % c.group_size != 0)) {
    reject("group_size must divide n; give explicit groups instead");
  }
  const auto groups = config_groups(c);
  if (groups.m_max() > c.k) reject("every group size must be at most k");
}

GroupStructure config_groups(const ExperimentConfig& c) {
  if (c.groups) return make_group_structure(c.n, *c.groups);
  return uniform_groups(c.n, c.group_size);
}

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kParse, "config must be a JSON object");
  static const std::set<std::string> known = {"n",      "m",           "k",    "t",      "m_list",   "group_size",
                                              "groups", "trials",      "eps",  "seed",   "p_list",   "noise_model",
                                              "ensemble", "workers",   "certify", "outputs"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw Error(ErrorKind::kParse, "unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  c.n = optional_field(j, "n", 0);
  c.k = optional_field(j, "k", 0);
  c.t = optional_field(j, "t", 2.0);
  c.m_list = optional_field(j, "m_list", std::vector<int>{});
  c.m = optional_field(j, "m", c.m_list.empty() ? 0 : c.m_list.back());
  c.group_size = optional_field(j, "group_size", 0);
  if (j.contains("groups") && !j.at("groups").is_null()) {
    std::vector<IndexSet> groups;
    for (const auto& g : j.at("groups")) groups.push_back(index_set_from_json(g));
    c.groups = std::move(groups);
  }
  c.trials = optional_field(j, "trials", 0);
  c.eps = optional_field(j, "eps", 0.0);
  const auto noise = optional_field(j, "noise_model", std::string("none"));
  if (noise == "none") {
    c.noise = NoiseModel::kNone;
  } else if (noise == "gaussian_ball") {
    c.noise = NoiseModel::kGaussianBall;
  } else {
    reject("noise_model must be 'none' or 'gaussian_ball'");
  }
  c.seed = optional_field(j, "seed", std::uint64_t{0});
  c.p_list = optional_field(j, "p_list", c.p_list);
  c.ensemble = optional_field(j, "ensemble", c.ensemble);
  c.workers = optional_field(j, "workers", 1);
  c.certify = optional_field(j, "certify", true);
  if (j.contains("outputs")) {
    c.csv_path = optional_field(j.at("outputs"), "csv", std::string());
    c.summary_path = optional_field(j.at("outputs"), "summary", std::string());
  }
  validate(c);
  return c;
}

Json to_json(const ExperimentConfig& c) {
  Json j = {{"n", c.n},
            {"m", c.m},
            {"k", c.k},
            {"t", c.t},
            {"trials", c.trials},
            {"eps", c.eps},
            {"noise_model", noise_name(c.noise)},
            {"seed", c.seed},
            {"p_list", c.p_list},
            {"ensemble", c.ensemble},
            {"m_list", c.m_list},
            {"workers", c.workers},
            {"certify", c.certify}};
  if (c.groups) {
    Json groups = Json::array();
    for (const auto& g : *c.groups) groups.push_back(index_set_to_json(g));
    j["groups"] = groups;
  } else {
    j["group_size"] = c.group_size;
  }
  if (!c.csv_path.empty() || !c.summary_path.empty()) {
    j["outputs"] = {{"csv", c.csv_path}, {"summary", c.summary_path}};
  }
  return j;
}

SensingMatrix make_matrix(const std::string& ensemble, int m, int n, std::uint64_t seed) {
  if (ensemble == "gaussian") return gaussian_matrix(m, n, seed);
  if (ensemble == "orthonormal_rows") return orthonormal_rows_matrix(m, n, seed);
  throw Error(ErrorKind::kInvalidArgument, "unknown ensemble '" + ensemble + "'");
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  SplitMix64 mix(seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(trial) + 1)));
  return mix.next();
}

TrialInstance draw_instance(const ExperimentConfig& config, const GroupStructure& groups, int m, int trial,
                            const EnumerationLimits& limits) {
  return draw_with(config, enumerate_gks(groups, config.k, limits), m, groups.n(), trial);
}

TrialRecord run_trial(const ExperimentConfig& config, const GroupStructure& groups, int m, int trial,
                      const EnumerationLimits& limits) {
  return trial_with(config, groups, enumerate_gks(groups, config.k, limits), m, trial, limits);
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& config, const GroupStructure& groups, int m,
                                        const EnumerationLimits& limits) {
  std::vector<TrialRecord> records(static_cast<std::size_t>(config.trials));
  if (config.trials == 0) return records;
  const auto gks = enumerate_gks(groups, config.k, limits);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < config.trials; i = next++) {
      records[static_cast<std::size_t>(i)] = trial_with(config, groups, gks, m, i, limits);
    }
  };
  const int workers = std::min(config.workers, config.trials);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return records;
}

std::string records_csv(const std::vector<TrialRecord>& records, const std::vector<double>& p_list) {
  std::ostringstream out;
  out << "trial,delta,threshold,certified,success";
  for (double p : p_list) out << ",err_p" << format_real(p) << ",bound_p" << format_real(p);
  out << ",bounds_ok,status\n";
  for (const auto& r : records) {
    out << r.trial << ',' << csv_real(r.delta) << ',' << csv_real(r.threshold) << ',' << csv_bool(r.certified)
        << ',' << csv_bool(r.success);
    bool all_ok = r.certified;
    for (std::size_t i = 0; i < p_list.size(); ++i) {
      out << ',' << csv_real(r.err[i]) << ',' << csv_real(r.bound[i]);
      all_ok = all_ok && r.bound_ok[i];
    }
    out << ',' << (r.certified ? csv_bool(all_ok) : "") << ',' << csv_text(r.status) << '\n';
  }
  return out.str();
}

Json summarize(const ExperimentConfig& config, const std::vector<TrialRecord>& records) {
  int certified = 0, successes = 0, certified_successes = 0, errors = 0, violations = 0;
  for (const auto& r : records) {
    if (r.status != "ok") ++errors;
    if (r.success) ++successes;
    if (r.certified) {
      ++certified;
      if (r.success) ++certified_successes;
      for (bool ok : r.bound_ok) {
        if (!ok) {
          ++violations;
          break;
        }
      }
    }
  }
  const auto rate = [&](int count, int total) { return total == 0 ? Json(nullptr) : Json(double(count) / total); };
  return {{"trials", records.size()},
          {"certified", certified},
          {"successes", successes},
          {"certified_successes", certified_successes},
          {"errors", errors},
          {"bound_violations", violations},
          {"success_rate", rate(successes, static_cast<int>(records.size()))},
          {"certified_rate", rate(certified, static_cast<int>(records.size()))},
          {"certified_success_rate", rate(certified_successes, certified)},
          {"negative_verdict", negative_verdict(records)},
          {"config", to_json(config)}};
}

bool negative_verdict(const std::vector<TrialRecord>& records) {
  for (const auto& r : records) {
    if (!r.certified) continue;
    for (bool ok : r.bound_ok) {
      if (!ok) return true;
    }
  }
  return false;
}

std::vector<PhaseRow> run_phase(const ExperimentConfig& config, const EnumerationLimits& limits) {
  if (config.m_list.empty()) reject("phase needs a nonempty m_list");
  const auto groups = config_groups(config);
  const auto singles = singleton_groups(config.n);
  std::vector<PhaseRow> rows;
  for (int m : config.m_list) {
    for (const bool group_arm : {true, false}) {
      ExperimentConfig c = config;
      c.m = m;
      const auto records = run_experiment(c, group_arm ? groups : singles, m, limits);
      PhaseRow row;
      row.m = m;
      row.arm = group_arm ? "group" : "singleton";
      row.trials = static_cast<int>(records.size());
      for (const auto& r : records) {
        if (r.success) ++row.successes;
        if (r.certified) ++row.certified;
        if (r.status != "ok") ++row.errors;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string phase_csv(const std::vector<PhaseRow>& rows) {
  std::ostringstream out;
  out << "m,arm,trials,successes,success_rate,certified,certified_rate,errors\n";
  for (const auto& r : rows) {
    const double sr = r.trials == 0 ? kNaN : double(r.successes) / r.trials;
    const double cr = r.trials == 0 ? kNaN : double(r.certified) / r.trials;
    out << r.m << ',' << r.arm << ',' << r.trials << ',' << r.successes << ',' << csv_real(sr) << ','
        << r.certified << ',' << csv_real(cr) << ',' << r.errors << '\n';
  }
  return out.str();
}

}  // namespace gsparse::cli
