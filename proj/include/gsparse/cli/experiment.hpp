#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gsparse/cli/io.hpp"

namespace gsparse::cli {

enum class NoiseModel { kNone, kGaussianBall };

struct ExperimentConfig {
  int n = 0;
  int m = 0;
  int k = 0;
  double t = 2.0;
  int group_size = 0;                           // used when `groups` is empty
  std::optional<std::vector<IndexSet>> groups;  // 0-based in memory
  int trials = 0;
  double eps = 0.0;
  NoiseModel noise = NoiseModel::kNone;
  std::uint64_t seed = 0;
  std::vector<double> p_list{1.0, 1.5, 2.0};
  std::string ensemble = "gaussian";  // or "orthonormal_rows"
  std::vector<int> m_list;            // phase sweeps only
  int workers = 1;
  bool certify = true;  // compute the exact GRIP of order tk per trial
  std::string csv_path;
  std::string summary_path;
};

// Parses and validates: t k integral, m <= n, every group size <= k,
// group_size dividing n, p in [1, 2].
ExperimentConfig config_from_json(const Json& j);
Json to_json(const ExperimentConfig& config);
void validate(const ExperimentConfig& config);

GroupStructure config_groups(const ExperimentConfig& config);

SensingMatrix make_matrix(const std::string& ensemble, int m, int n, std::uint64_t seed);

struct TrialInstance {
  SensingMatrix a;
  Vector x;      // group k-sparse truth
  Vector noise;  // ||noise||_2 <= eps
  Vector y;
};

// Seed of trial i; identical across the m values and arms of a sweep.
std::uint64_t trial_seed(std::uint64_t seed, int trial);

// The support is a uniformly chosen maximal group k-sparse set filled with
// standard normals; noise is uniform in the closed eps-ball.
TrialInstance draw_instance(const ExperimentConfig& config, const GroupStructure& groups, int m, int trial,
                            const EnumerationLimits& limits = {});

struct TrialRecord {
  int trial = 0;
  double delta = 0.0;  // NaN when not computed
  double threshold = 0.0;
  bool certified = false;
  bool success = false;  // ||xhat - x||_2 <= 1e-6 + eps
  std::vector<double> err;    // ||xhat - x||_p per p
  std::vector<double> bound;  // NaN without a valid certificate
  std::vector<bool> bound_ok;
  std::string status = "ok";  // "error: ..." for a failed trial
};

TrialRecord run_trial(const ExperimentConfig& config, const GroupStructure& groups, int m, int trial,
                      const EnumerationLimits& limits = {});

// Trials in id order; config.workers threads never change the result.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& config, const GroupStructure& groups, int m,
                                        const EnumerationLimits& limits = {});

// Columns: trial, delta, threshold, certified, success, err_p<p>, bound_p<p>
// (one pair per p), bounds_ok, status.
std::string records_csv(const std::vector<TrialRecord>& records, const std::vector<double>& p_list);

Json summarize(const ExperimentConfig& config, const std::vector<TrialRecord>& records);

// True when some certified trial broke a bound. Noiseless bounds are zero,
// so this includes failed exact recovery.
bool negative_verdict(const std::vector<TrialRecord>& records);

struct PhaseRow {
  int m = 0;
  std::string arm;  // "group" or "singleton"
  int trials = 0;
  int successes = 0;
  int certified = 0;
  int errors = 0;
};

// For every m in config.m_list, the group arm uses config's groups and the
// singleton arm uses singleton groups (k-sparse truths); trial seeds are
// shared.
std::vector<PhaseRow> run_phase(const ExperimentConfig& config, const EnumerationLimits& limits = {});

std::string phase_csv(const std::vector<PhaseRow>& rows);

}  // namespace gsparse::cli
