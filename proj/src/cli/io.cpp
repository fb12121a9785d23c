#include "gsparse/cli/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gsparse/error.hpp"

namespace gsparse::cli {

namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw Error(ErrorKind::kParse, std::string("missing field '") + name + "'");
  }
  return j.at(name);
}

template <class T>
T get(const Json& j, const char* name) {
  try {
    return field(j, name).get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("field '") + name + "': " + e.what());
  }
}

std::optional<double> optional_real(const Json& j, const char* name) {
  if (!j.contains(name) || j.at(name).is_null()) return std::nullopt;
  return get<double>(j, name);
}

Json optional_to_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::vector<double> reals(const Json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorKind::kParse, std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw Error(ErrorKind::kParse, std::string(what) + " holds a non-number");
    out.push_back(x.get<double>());
  }
  return out;
}

Vector to_vector(const std::vector<double>& data) {
  return Eigen::Map<const Vector>(data.data(), static_cast<Eigen::Index>(data.size()));
}

Json reals_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace

Json index_set_to_json(const IndexSet& indices) {
  Json out = Json::array();
  for (int i : indices) out.push_back(i + 1);
  return out;
}

IndexSet index_set_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::kParse, "index list must be an array");
  IndexSet out;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw Error(ErrorKind::kParse, "indices must be integers");
    out.push_back(x.get<int>() - 1);
  }
  return out;
}

Json to_json(const GroupStructure& groups) {
  Json list = Json::array();
  for (const auto& g : groups.groups()) list.push_back(index_set_to_json(g));
  return {{"n", groups.n()}, {"groups", list}};
}

GroupStructure groups_from_json(const Json& j) {
  const int n = get<int>(j, "n");
  const Json& list = field(j, "groups");
  if (!list.is_array()) throw Error(ErrorKind::kParse, "'groups' must be an array");
  std::vector<IndexSet> groups;
  for (const auto& g : list) groups.push_back(index_set_from_json(g));
  return make_group_structure(n, std::move(groups));
}

Json to_json(const Vector& v) { return {{"data", reals_to_json(v)}}; }

Vector vector_from_json(const Json& j) { return to_vector(reals(field(j, "data"), "'data'")); }

Json to_json(const SensingMatrix& a) {
  Json data = Json::array();
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) data.push_back(a.entries()(r, c));
  }
  const auto& p = a.provenance();
  return {{"rows", a.rows()},
          {"cols", a.cols()},
          {"data", data},
          {"provenance", {{"generator", p.generator}, {"seed", p.seed}, {"normalization", p.normalization}}}};
}

SensingMatrix matrix_from_json(const Json& j) {
  const int rows = get<int>(j, "rows");
  const int cols = get<int>(j, "cols");
  if (rows < 1 || cols < 1) throw Error(ErrorKind::kParse, "matrix dimensions must be positive");
  const auto data = reals(field(j, "data"), "'data'");
  if (data.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw Error(ErrorKind::kParse, "matrix 'data' length does not equal rows * cols");
  }
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = data[static_cast<std::size_t>(r) * cols + c];
  }
  Provenance p;
  if (j.contains("provenance")) {
    const Json& pj = j.at("provenance");
    p.generator = get<std::string>(pj, "generator");
    p.seed = get<std::uint64_t>(pj, "seed");
    p.normalization = get<std::string>(pj, "normalization");
  }
  return SensingMatrix(std::move(m), std::move(p));
}

Json to_json(const RecoveryProblem& problem) {
  return {{"matrix", to_json(problem.a)}, {"y", reals_to_json(problem.y)}, {"eps", problem.eps}};
}

RecoveryProblem problem_from_json(const Json& j) {
  RecoveryProblem p{matrix_from_json(field(j, "matrix")), to_vector(reals(field(j, "y"), "'y'")),
                    get<double>(j, "eps")};
  if (p.y.size() != p.a.rows()) throw Error(ErrorKind::kDimensionMismatch, "y does not match the matrix rows");
  if (!(p.eps >= 0.0)) throw Error(ErrorKind::kParse, "eps must be nonnegative");
  return p;
}

Json to_json(const DecodeResult& result) {
  return {{"xhat", reals_to_json(result.xhat)},
          {"objective", result.objective},
          {"feasibility_gap", result.feasibility_gap},
          {"iterations", result.iterations},
          {"converged", result.converged},
          {"method", result.method == DecodeMethod::kLpExact ? "lp_exact" : "proximal"}};
}

DecodeResult decode_result_from_json(const Json& j) {
  DecodeResult r;
  r.xhat = to_vector(reals(field(j, "xhat"), "'xhat'"));
  r.objective = get<double>(j, "objective");
  r.feasibility_gap = get<double>(j, "feasibility_gap");
  r.iterations = get<int>(j, "iterations");
  r.converged = get<bool>(j, "converged");
  const auto method = get<std::string>(j, "method");
  if (method == "lp_exact") {
    r.method = DecodeMethod::kLpExact;
  } else if (method == "proximal") {
    r.method = DecodeMethod::kProximal;
  } else {
    throw Error(ErrorKind::kParse, "unknown method '" + method + "'");
  }
  return r;
}

Json to_json(const IsometryReport& report) {
  return {{"kind", report.kind == IsometryKind::kRip ? "rip" : "grip"},
          {"order", report.order},
          {"delta", report.delta},
          {"exact", report.exact},
          {"extremal_support", index_set_to_json(report.extremal_support)},
          {"eigen_min", report.eigen_min},
          {"eigen_max", report.eigen_max},
          {"supports_tested", report.supports_tested}};
}

IsometryReport isometry_from_json(const Json& j) {
  IsometryReport r;
  const auto kind = get<std::string>(j, "kind");
  if (kind != "rip" && kind != "grip") throw Error(ErrorKind::kParse, "unknown isometry kind '" + kind + "'");
  r.kind = kind == "rip" ? IsometryKind::kRip : IsometryKind::kGrip;
  r.order = get<int>(j, "order");
  r.delta = get<double>(j, "delta");
  r.exact = get<bool>(j, "exact");
  r.extremal_support = index_set_from_json(field(j, "extremal_support"));
  r.eigen_min = get<double>(j, "eigen_min");
  r.eigen_max = get<double>(j, "eigen_max");
  r.supports_tested = get<std::size_t>(j, "supports_tested");
  return r;
}

Json to_json(const GrnspCertificate& cert) {
  return {{"t", cert.t},
          {"k", cert.k},
          {"delta", cert.delta},
          {"threshold", cert.threshold},
          {"margin", cert.margin()},
          {"valid", cert.valid},
          {"reason", cert.reason},
          {"mu", cert.mu},
          {"a_squared", cert.a_squared},
          {"a", optional_to_json(cert.a)},
          {"b", optional_to_json(cert.b)},
          {"c", optional_to_json(cert.c)},
          {"rho", optional_to_json(cert.rho)},
          {"tau", optional_to_json(cert.tau)}};
}

GrnspCertificate certificate_from_json(const Json& j) {
  GrnspCertificate c;
  c.t = get<double>(j, "t");
  c.k = get<int>(j, "k");
  c.delta = get<double>(j, "delta");
  c.threshold = get<double>(j, "threshold");
  c.valid = get<bool>(j, "valid");
  c.reason = get<std::string>(j, "reason");
  c.mu = get<double>(j, "mu");
  c.a_squared = get<double>(j, "a_squared");
  c.a = optional_real(j, "a");
  c.b = optional_real(j, "b");
  c.c = optional_real(j, "c");
  c.rho = optional_real(j, "rho");
  c.tau = optional_real(j, "tau");
  return c;
}

Json to_json(const ConvexDecomposition& dec) {
  Json atoms = Json::array();
  for (const auto& u : dec.atoms) atoms.push_back(reals_to_json(u));
  return {{"alpha", dec.alpha},
          {"s", dec.s},
          {"weights", dec.weights},
          {"atoms", atoms},
          {"source", reals_to_json(dec.source)}};
}

ConvexDecomposition decomposition_from_json(const Json& j) {
  ConvexDecomposition dec;
  dec.alpha = get<double>(j, "alpha");
  dec.s = get<int>(j, "s");
  dec.weights = reals(field(j, "weights"), "'weights'");
  const Json& atoms = field(j, "atoms");
  if (!atoms.is_array()) throw Error(ErrorKind::kParse, "'atoms' must be an array");
  for (const auto& a : atoms) dec.atoms.push_back(to_vector(reals(a, "atom")));
  if (dec.atoms.size() != dec.weights.size()) throw Error(ErrorKind::kParse, "one weight per atom required");
  dec.source = to_vector(reals(field(j, "source"), "'source'"));
  for (const auto& a : dec.atoms) {
    if (a.size() != dec.source.size()) throw Error(ErrorKind::kParse, "atom length differs from source");
  }
  return dec;
}

Json to_json(const DecompositionCheck& check) {
  return {{"passed", check.passed()},
          {"support_contained", check.support_contained},
          {"norm_preserved", check.norm_preserved},
          {"group_sparse", check.group_sparse},
          {"convex_combination", check.convex_combination},
          {"energy_bound", check.energy_bound},
          {"reconstruction_error", check.reconstruction_error},
          {"weight_sum_error", check.weight_sum_error},
          {"max_norm_deviation", check.max_norm_deviation},
          {"max_energy_ratio", check.max_energy_ratio}};
}

Json to_json(const GrnspSampleReport& report) {
  Json out = {{"holds", report.holds()},
              {"trials", report.trials},
              {"checks", report.checks},
              {"violations", report.violations},
              {"l1_violations", report.l1_violations},
              {"l1_without_l2", report.l1_without_l2},
              {"passing_trials", report.passing_trials},
              {"worst_ratio", report.worst_ratio},
              {"worst_support", index_set_to_json(report.worst_support)}};
  out["worst_h"] = report.worst_h ? reals_to_json(*report.worst_h) : Json(nullptr);
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kParse, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "write failed for '" + path + "'");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace gsparse::cli
