#include "gsparse/cli/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gsparse/error.hpp"

namespace gsparse::cli {

namespace {

namespace fs = std::filesystem;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
  bool quiet = false;
};

std::string csv_cell(const Json& v) {
  std::string text;
  if (v.is_string()) {
    text = v.get<std::string>();
  } else if (v.is_number_float()) {
    text = format_real(v.get<double>());
  } else if (v.is_null()) {
    text = "";
  } else {
    text = v.dump();
  }
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

class Runner {
 public:
  Runner(const Globals& globals, std::ostream& out) : g_(globals), out_(out) {}

  // Prints `j` per --format unless --quiet; --out names a file here.
  void emit(const Json& j) const {
    const std::string text = g_.format == "csv" ? object_csv(j) : dump(j);
    if (!g_.out.empty()) write_text_file(g_.out, text);
    if (!g_.quiet) out_ << text;
  }

  void print(const std::string& text) const {
    if (!g_.quiet) out_ << text;
  }

  const Globals& globals() const { return g_; }

 private:
  const Globals& g_;
  std::ostream& out_;
};

ExperimentConfig load_config(const std::string& path, const Globals& g) {
  Json j = read_json_file(path);
  if (g.seed && j.is_object()) j["seed"] = *g.seed;
  return config_from_json(j);
}

GroupStructure load_groups_or_singletons(const std::string& path, int n) {
  if (path.empty()) return singleton_groups(n);
  return groups_from_json(read_json_file(path));
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create directory '" + dir + "': " + ec.message());
}

}  // namespace

EnumerationLimits limits_from_env() {
  EnumerationLimits limits;
  if (const char* raw = std::getenv("GSPARSE_MAX_ENUM")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0' || v == 0) {
      throw Error(ErrorKind::kInvalidArgument, std::string("GSPARSE_MAX_ENUM must be a positive integer, got '") +
                                                   raw + "'");
    }
    limits.max_supports = static_cast<std::size_t>(v);
  }
  return limits;
}

std::vector<std::string> cmd_gen(const ExperimentConfig& config, const std::string& dir, int trial,
                                 const EnumerationLimits& limits) {
  const auto groups = config_groups(config);
  const auto inst = draw_instance(config, groups, config.m, trial, limits);
  ensure_dir(dir);
  const fs::path base(dir);
  const std::vector<std::pair<std::string, Json>> files = {
      {"matrix.json", to_json(inst.a)},
      {"groups.json", to_json(groups)},
      {"truth.json", to_json(inst.x)},
      {"measurements.json", to_json(RecoveryProblem{inst.a, inst.y, config.eps})},
  };
  std::vector<std::string> written;
  for (const auto& [name, j] : files) {
    const std::string path = (base / name).string();
    write_text_file(path, dump(j));
    written.push_back(path);
  }
  return written;
}

std::string object_csv(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kInvalidArgument, "csv output needs a JSON object");
  std::string header, row;
  bool first = true;
  for (const auto& [key, value] : j.items()) {
    if (!first) {
      header += ',';
      row += ',';
    }
    first = false;
    header += csv_cell(key);
    row += csv_cell(value);
  }
  return header + "\n" + row + "\n";
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Group-sparse recovery toolkit: GRIP certificates, l1 decoding and experiments", "gsparse"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Override the config seed");
  app.add_option("--out", g.out, "Output directory (gen, run, phase) or output file (other subcommands)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--quiet", g.quiet, "Suppress standard output");

  int code = kExitOk;
  std::function<void()> action;
  Runner runner(g, out);

  // gen
  std::string gen_config;
  int gen_trial = 0;
  auto* gen = app.add_subcommand("gen", "Write matrix, groups, truth and measurement files for one trial");
  gen->add_option("--config", gen_config, "Experiment config JSON")->required();
  gen->add_option("--trial", gen_trial, "Trial id")->check(CLI::NonNegativeNumber);
  gen->callback([&] {
    action = [&] {
      const auto cfg = load_config(gen_config, g);
      const auto files = cmd_gen(cfg, g.out.empty() ? "." : g.out, gen_trial, limits_from_env());
      for (const auto& f : files) runner.print(f + "\n");
    };
  });

  // certify
  std::string cert_matrix, cert_groups;
  int cert_k = 0;
  double cert_t = 2.0;
  int cert_samples = 0;
  auto* certify = app.add_subcommand("certify", "Exact GRIP of order tk and the resulting GRNSP certificate");
  certify->add_option("--matrix", cert_matrix, "Matrix JSON")->required();
  certify->add_option("--groups", cert_groups, "Groups JSON (default: singletons)");
  certify->add_option("--k", cert_k, "Sparsity order")->required();
  certify->add_option("--t", cert_t, "Order multiplier t >= 4/3");
  certify->add_option("--samples", cert_samples, "Also sample the null space property this many times")
      ->check(CLI::NonNegativeNumber);
  certify->callback([&] {
    action = [&] {
      const auto a = matrix_from_json(read_json_file(cert_matrix));
      const auto groups = load_groups_or_singletons(cert_groups, a.cols());
      const int tk = integral_order(cert_t, cert_k);
      IsometryOptions opts;
      opts.limits = limits_from_env();
      const auto grip = grip_constant(a, tk, groups, opts);
      const auto cert = certificate_for_delta(cert_t, cert_k, grip.delta, groups);
      Json j = to_json(cert);
      j["grip"] = to_json(grip);
      bool verdict = cert.valid;
      if (cert.valid && cert_samples > 0) {
        GrnspSampling s;
        s.trials = cert_samples;
        s.seed = g.seed.value_or(0);
        s.limits = opts.limits;
        const auto report = grnsp_holds_sampled(a, cert_k, groups, *cert.rho, *cert.tau, s);
        j["sampled"] = to_json(report);
        verdict = verdict && report.holds();
      }
      runner.emit(j);
      code = verdict ? kExitOk : kExitNegative;
    };
  });

  // decode
  std::string dec_problem;
  auto* decode_cmd = app.add_subcommand("decode", "l1 decoding: basis pursuit (eps = 0) or its denoising form");
  decode_cmd->add_option("--problem", dec_problem, "Problem JSON")->required();
  decode_cmd->callback([&] {
    action = [&] {
      const auto problem = problem_from_json(read_json_file(dec_problem));
      runner.emit(to_json(decode(problem)));
    };
  });

  // run
  std::string run_config;
  auto* run = app.add_subcommand("run", "Generate, certify, decode and check bounds over many trials");
  run->add_option("--config", run_config, "Experiment config JSON")->required();
  run->callback([&] {
    action = [&] {
      const auto cfg = load_config(run_config, g);
      const auto groups = config_groups(cfg);
      const auto records = run_experiment(cfg, groups, cfg.m, limits_from_env());
      const std::string csv = records_csv(records, cfg.p_list);
      const Json summary = summarize(cfg, records);
      std::string csv_path = cfg.csv_path, summary_path = cfg.summary_path;
      if (!g.out.empty()) {
        ensure_dir(g.out);
        csv_path = (fs::path(g.out) / "trials.csv").string();
        summary_path = (fs::path(g.out) / "summary.json").string();
      }
      if (!csv_path.empty()) write_text_file(csv_path, csv);
      if (!summary_path.empty()) write_text_file(summary_path, dump(summary));
      runner.print(g.format == "csv" ? csv : dump(summary));
      code = negative_verdict(records) ? kExitNegative : kExitOk;
    };
  });

  // phase
  std::string phase_config;
  auto* phase = app.add_subcommand("phase", "Empirical success rate against m, group arm versus singleton arm");
  phase->add_option("--config", phase_config, "Experiment config JSON with m_list")->required();
  phase->callback([&] {
    action = [&] {
      const auto cfg = load_config(phase_config, g);
      const auto rows = run_phase(cfg, limits_from_env());
      const std::string csv = phase_csv(rows);
      if (!g.out.empty()) {
        ensure_dir(g.out);
        write_text_file((fs::path(g.out) / "phase.csv").string(), csv);
      }
      if (g.format == "csv") {
        runner.print(csv);
      } else {
        Json list = Json::array();
        for (const auto& r : rows) {
          list.push_back({{"m", r.m},
                          {"arm", r.arm},
                          {"trials", r.trials},
                          {"successes", r.successes},
                          {"certified", r.certified},
                          {"errors", r.errors}});
        }
        runner.print(dump(list));
      }
    };
  });

  // decompose
  std::string dcp_vector, dcp_groups;
  double dcp_alpha = 0.0;
  int dcp_s = 0;
  auto* decompose = app.add_subcommand("decompose", "Convex decomposition into group sparse atoms");
  decompose->add_option("--vector", dcp_vector, "Vector JSON")->required();
  decompose->add_option("--groups", dcp_groups, "Groups JSON (default: singletons)");
  decompose->add_option("--alpha", dcp_alpha, "Per-group l1 cap")->required();
  decompose->add_option("--s", dcp_s, "Number of groups per atom")->required();
  decompose->callback([&] {
    action = [&] {
      const auto v = vector_from_json(read_json_file(dcp_vector));
      const auto groups = load_groups_or_singletons(dcp_groups, static_cast<int>(v.size()));
      const auto dec = polytope_decompose(v, dcp_alpha, dcp_s, groups);
      const auto check = check_decomposition(dec, groups);
      runner.emit({{"decomposition", to_json(dec)}, {"check", to_json(check)}});
      code = check.passed() ? kExitOk : kExitNegative;
    };
  });

  // index
  std::string idx_vector, idx_groups, idx_norm = "l1";
  int idx_k = 0;
  double idx_p = 1.0;
  auto* index = app.add_subcommand("index", "Conventional and group sparsity indices");
  index->add_option("--vector", idx_vector, "Vector JSON")->required();
  index->add_option("--groups", idx_groups, "Groups JSON (default: singletons)");
  index->add_option("--k", idx_k, "Sparsity order")->required();
  index->add_option("--p", idx_p, "Norm exponent for the conventional index");
  index->add_option("--norm", idx_norm, "Norm for the group index")->check(CLI::IsMember({"l1", "l2"}));
  index->callback([&] {
    action = [&] {
      const auto x = vector_from_json(read_json_file(idx_vector));
      const auto groups = load_groups_or_singletons(idx_groups, static_cast<int>(x.size()));
      const auto conventional = sparsity_index(x, idx_k, idx_p);
      const auto grouped =
          group_sparsity_index(x, idx_k, groups, idx_norm == "l2" ? IndexNorm::kL2 : IndexNorm::kL1);
      Json group_ids = Json::array();
      for (int j : grouped.witness_groups) group_ids.push_back(j + 1);
      runner.emit({{"k", idx_k},
                   {"sparsity_index", conventional.value},
                   {"sparsity_witness", index_set_to_json(conventional.witness)},
                   {"group_sparsity_index", grouped.value},
                   {"group_witness", index_set_to_json(grouped.witness)},
                   {"group_witness_groups", group_ids},
                   {"group_k_sparse", is_group_k_sparse(x, idx_k, groups)}});
    };
  });

  // grip
  std::string grip_matrix, grip_groups;
  int grip_k = 0;
  int grip_samples = 0;
  auto* grip = app.add_subcommand("grip", "Exact GRIP constant, or a sampled lower bound");
  grip->add_option("--matrix", grip_matrix, "Matrix JSON")->required();
  grip->add_option("--groups", grip_groups, "Groups JSON (default: singletons)");
  grip->add_option("--k", grip_k, "Order")->required();
  grip->add_option("--lower-bound", grip_samples, "Sample this many supports instead of enumerating")
      ->check(CLI::NonNegativeNumber);
  grip->callback([&] {
    action = [&] {
      const auto a = matrix_from_json(read_json_file(grip_matrix));
      const auto groups = load_groups_or_singletons(grip_groups, a.cols());
      IsometryOptions opts;
      opts.limits = limits_from_env();
      const auto report = grip_samples > 0 ? grip_lower_bound(a, grip_k, groups, grip_samples, g.seed.value_or(0))
                                           : grip_constant(a, grip_k, groups, opts);
      runner.emit(to_json(report));
    };
  });

  std::vector<char*> argv;
  std::vector<std::string> storage(args);
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitError;
  }
  try {
    if (action) action();
  } catch (const Error& e) {
    err << "gsparse: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "gsparse: " << e.what() << "\n";
    return kExitError;
  }
  return code;
}

}  // namespace gsparse::cli
