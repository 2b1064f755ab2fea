#include "ngca/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <set>

#include "ngca/cumulant.hpp"
#include "ngca/entropy.hpp"
#include "ngca/error.hpp"
#include "ngca/instance.hpp"
#include "ngca/moments.hpp"
#include "ngca/report.hpp"
#include "ngca/sample_io.hpp"

namespace ngca {

using nlohmann::json;

std::string_view to_string(Method m) {
  switch (m) {
    case Method::EntropyDescent: return "entropy_descent";
    case Method::Cumulant: return "cumulant";
    case Method::Both: return "both";
  }
  return "?";
}

namespace {

// ---- config parsing -------------------------------------------------------

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "/" : path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError(path + "/" + key, "unknown key");
  }
}

const json& required(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) throw ConfigError(path + "/" + key, "missing required key");
  return obj.at(key);
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

std::int64_t get_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<std::int64_t>();
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

template <typename T, typename Get>
void opt(const json& obj, const std::string& path, const char* key, std::optional<T>& out, Get get) {
  if (obj.contains(key)) out = static_cast<T>(get(obj.at(key), path + "/" + key));
}

LawSpec parse_law(const json& v, const std::string& path) {
  LawSpec law;
  std::string kind;
  if (v.is_string()) {
    kind = v.get<std::string>();
  } else {
    only_keys(v, path, {"kind", "params"});
    kind = get_string(required(v, path, "kind"), path + "/kind");
    if (v.contains("params")) {
      const auto& ps = v.at("params");
      if (!ps.is_array()) throw ConfigError(path + "/params", "expected an array");
      for (std::size_t i = 0; i < ps.size(); ++i)
        law.params.push_back(get_number(ps[i], path + "/params/" + std::to_string(i)));
    }
  }
  try {
    law.kind = law_kind_from_string(kind);
    (void)NonGaussianLaw::make(law.kind, law.params);
  } catch (const Error& e) {
    throw ConfigError(v.is_string() ? path : path + "/kind", e.what());
  }
  return law;
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& j) {
  ExperimentConfig cfg;
  only_keys(j, "", {"schema_version", "instance", "sampling", "method", "solver", "cumulant", "outputs"});

  cfg.schema_version = static_cast<int>(get_int(required(j, "", "schema_version"), "/schema_version"));
  if (cfg.schema_version != kConfigSchemaVersion)
    throw ConfigError("/schema_version", "unsupported schema version " + std::to_string(cfg.schema_version));

  const json& inst = required(j, "", "instance");
  only_keys(inst, "/instance", {"n", "p", "r", "laws"});
  cfg.instance.n = static_cast<int>(get_int(required(inst, "/instance", "n"), "/instance/n"));
  cfg.instance.p = static_cast<int>(get_int(required(inst, "/instance", "p"), "/instance/p"));
  if (inst.contains("r")) cfg.instance.r = static_cast<int>(get_int(inst.at("r"), "/instance/r"));
  if (cfg.instance.n < 1 || cfg.instance.n > kMaxCumulantDim)
    throw ConfigError("/instance/n", "n must lie in [1, 32]");
  if (cfg.instance.p < 0 || cfg.instance.p > cfg.instance.n)
    throw ConfigError("/instance/p", "p must lie in [0, n]");
  if (cfg.instance.r < 3 || cfg.instance.r > 8) throw ConfigError("/instance/r", "r must lie in [3, 8]");
  const json& laws = required(inst, "/instance", "laws");
  if (!laws.is_array()) throw ConfigError("/instance/laws", "expected an array");
  for (std::size_t i = 0; i < laws.size(); ++i)
    cfg.instance.laws.push_back(parse_law(laws[i], "/instance/laws/" + std::to_string(i)));
  if (static_cast<int>(cfg.instance.laws.size()) != cfg.instance.n - cfg.instance.p)
    throw ConfigError("/instance/laws", "expected n − p = " +
                                            std::to_string(cfg.instance.n - cfg.instance.p) + " laws");

  const json& sampling = required(j, "", "sampling");
  only_keys(sampling, "/sampling", {"N", "seed"});
  cfg.N = get_int(required(sampling, "/sampling", "N"), "/sampling/N");
  if (cfg.N < 1000 || cfg.N > 100'000'000) throw ConfigError("/sampling/N", "N must lie in [1e3, 1e8]");
  const json& seed = required(sampling, "/sampling", "seed");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0))
    throw ConfigError("/sampling/seed", "expected a non-negative integer");
  cfg.seed = seed.get<std::uint64_t>();

  if (j.contains("method")) {
    const std::string m = get_string(j.at("method"), "/method");
    if (m == "entropy_descent") cfg.method = Method::EntropyDescent;
    else if (m == "cumulant") cfg.method = Method::Cumulant;
    else if (m == "both") cfg.method = Method::Both;
    else throw ConfigError("/method", "expected entropy_descent, cumulant or both");
  }

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    const std::string p = "/solver";
    only_keys(s, p, {"eta", "eps1", "eps2", "fd_step_h", "noise_t_prime", "D_hint", "K_hint",
                     "truncation_A", "bucket_width_B", "max_iters", "grad_repeats",
                     "restarts_per_level"});
    auto& o = cfg.solver;
    opt(s, p, "eta", o.eta, get_number);
    opt(s, p, "eps1", o.eps1, get_number);
    opt(s, p, "eps2", o.eps2, get_number);
    opt(s, p, "fd_step_h", o.fd_step_h, get_number);
    opt(s, p, "noise_t_prime", o.noise_t_prime, get_number);
    opt(s, p, "D_hint", o.D_hint, get_number);
    opt(s, p, "K_hint", o.K_hint, get_number);
    opt(s, p, "truncation_A", o.truncation_A, get_number);
    opt(s, p, "bucket_width_B", o.bucket_width_B, get_number);
    opt(s, p, "max_iters", o.max_iters, get_int);
    opt(s, p, "grad_repeats", o.grad_repeats, get_int);
    opt(s, p, "restarts_per_level", o.restarts_per_level, get_int);
    auto positive = [&](const std::optional<double>& v, const char* key) {
      if (v && !(*v > 0.0)) throw ConfigError(p + "/" + key, "must be positive");
    };
    positive(o.eta, "eta");
    positive(o.eps1, "eps1");
    positive(o.eps2, "eps2");
    positive(o.D_hint, "D_hint");
    positive(o.K_hint, "K_hint");
    positive(o.truncation_A, "truncation_A");
    positive(o.bucket_width_B, "bucket_width_B");
    if (o.fd_step_h && !(*o.fd_step_h > 1e-6 && *o.fd_step_h < 0.5))
      throw ConfigError(p + "/fd_step_h", "must lie in (1e-6, 0.5)");
    if (o.noise_t_prime && !(*o.noise_t_prime > 0.0 && *o.noise_t_prime < 1.0))
      throw ConfigError(p + "/noise_t_prime", "must lie in (0, 1)");
    if (o.max_iters && *o.max_iters < 0) throw ConfigError(p + "/max_iters", "must be >= 0");
    if (o.grad_repeats && *o.grad_repeats < 1) throw ConfigError(p + "/grad_repeats", "must be >= 1");
    if (o.restarts_per_level && *o.restarts_per_level < 1)
      throw ConfigError(p + "/restarts_per_level", "must be >= 1");
  }

  if (j.contains("cumulant")) {
    const json& c = j.at("cumulant");
    only_keys(c, "/cumulant", {"orders", "kernel_tol"});
    if (c.contains("orders")) {
      const json& os = c.at("orders");
      if (!os.is_array() || os.empty()) throw ConfigError("/cumulant/orders", "expected a non-empty array");
      cfg.cumulant.orders.clear();
      for (std::size_t i = 0; i < os.size(); ++i) {
        const auto o = get_int(os[i], "/cumulant/orders/" + std::to_string(i));
        if (o != 3 && o != 4) throw ConfigError("/cumulant/orders/" + std::to_string(i), "orders must be 3 or 4");
        cfg.cumulant.orders.push_back(static_cast<int>(o));
      }
    }
    if (c.contains("kernel_tol")) {
      cfg.cumulant.kernel_tol = get_number(c.at("kernel_tol"), "/cumulant/kernel_tol");
      if (!(cfg.cumulant.kernel_tol > 0.0 && cfg.cumulant.kernel_tol < 1.0))
        throw ConfigError("/cumulant/kernel_tol", "must lie in (0, 1)");
    }
  }

  if (j.contains("outputs")) {
    const json& o = j.at("outputs");
    only_keys(o, "/outputs", {"directory", "formats"});
    if (o.contains("directory")) cfg.output_dir = get_string(o.at("directory"), "/outputs/directory");
    if (o.contains("formats")) {
      const json& fs = o.at("formats");
      if (!fs.is_array()) throw ConfigError("/outputs/formats", "expected an array");
      bool has_json = false;
      cfg.write_csv = false;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        const std::string f = get_string(fs[i], "/outputs/formats/" + std::to_string(i));
        if (f == "json") has_json = true;
        else if (f == "csv") cfg.write_csv = true;
        else throw ConfigError("/outputs/formats/" + std::to_string(i), "expected json or csv");
      }
      if (!has_json) throw ConfigError("/outputs/formats", "json output is mandatory");
    }
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorCode::IoError, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("/", std::string("malformed JSON: ") + e.what());
  }
  return parse_experiment_config(j);
}

json to_json(const ExperimentConfig& cfg) {
  json laws = json::array();
  for (const auto& l : cfg.instance.laws) laws.push_back({{"kind", to_string(l.kind)}, {"params", l.params}});
  json solver = json::object();
  const auto& o = cfg.solver;
  auto put = [&](const char* key, const auto& v) {
    if (v) solver[key] = *v;
  };
  put("eta", o.eta);
  put("eps1", o.eps1);
  put("eps2", o.eps2);
  put("fd_step_h", o.fd_step_h);
  put("noise_t_prime", o.noise_t_prime);
  put("D_hint", o.D_hint);
  put("K_hint", o.K_hint);
  put("truncation_A", o.truncation_A);
  put("bucket_width_B", o.bucket_width_B);
  put("max_iters", o.max_iters);
  put("grad_repeats", o.grad_repeats);
  put("restarts_per_level", o.restarts_per_level);
  json formats = cfg.write_csv ? json{"json", "csv"} : json{"json"};
  return {{"schema_version", cfg.schema_version},
          {"instance", {{"n", cfg.instance.n}, {"p", cfg.instance.p}, {"r", cfg.instance.r}, {"laws", laws}}},
          {"sampling", {{"N", cfg.N}, {"seed", cfg.seed}}},
          {"method", to_string(cfg.method)},
          {"solver", solver},
          {"cumulant", {{"orders", cfg.cumulant.orders}, {"kernel_tol", cfg.cumulant.kernel_tol}}},
          {"outputs", {{"directory", cfg.output_dir.string()}, {"formats", formats}}}};
}

std::optional<std::uint64_t> seed_from_env() {
  const char* raw = std::getenv("NGCA_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  const std::string_view s(raw);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("$NGCA_SEED", "expected a non-negative integer, got '" + std::string(s) + "'");
  return v;
}

std::string config_hash(const ExperimentConfig& cfg) { return fnv1a_hex(to_json(cfg).dump()); }

FullConfig resolve_full_config(const ExperimentConfig& cfg, double D, double K) {
  const auto& o = cfg.solver;
  const auto N = static_cast<std::size_t>(cfg.N);
  FullConfig fc = default_full_config(N, cfg.instance.n, o.D_hint.value_or(D), o.K_hint.value_or(K),
                                      cfg.instance.r);
  auto& h = fc.descent.entropy_cfg;
  if (o.truncation_A || o.bucket_width_B) {
    if (o.truncation_A) h.truncation_A = *o.truncation_A;
    if (o.bucket_width_B) h.bucket_width_B = *o.bucket_width_B;
    const Thresholds t = practical_thresholds(fc.D_hint, fc.K_hint, fc.r, cfg.instance.n, N, h);
    fc.descent.eps1 = t.eps1;
    fc.descent.eps2 = t.eps2;
  }
  if (o.eta) fc.descent.eta = *o.eta;
  if (o.eps1) fc.descent.eps1 = *o.eps1;
  if (o.eps2) fc.descent.eps2 = *o.eps2;
  if (o.fd_step_h) fc.descent.fd_step_h = *o.fd_step_h;
  if (o.max_iters) fc.descent.max_iters = *o.max_iters;
  if (o.grad_repeats) fc.descent.grad_repeats = *o.grad_repeats;
  if (o.noise_t_prime) fc.noise_t_prime = *o.noise_t_prime;
  if (o.restarts_per_level) fc.restarts_per_level = *o.restarts_per_level;
  try {
    fc.validate();
  } catch (const Error& e) {
    throw ConfigError("/solver", e.what());
  }
  return fc;
}

// ---- running --------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Whitened-coordinate subspace → original coordinates: a whitened direction u
// is the functional ⟨X − μ, T·u⟩ of the raw data.
Subspace to_original(const Subspace& w, const Eigen::MatrixXd& T) {
  if (w.dim() == 0) return Subspace::zero(w.ambient_dim());
  return orthonormalize(T * w.basis());
}

json distance_or_null(const Subspace& a, const Subspace& b) {
  if (a.dim() != b.dim()) return nullptr;
  return subspace_distance(a, b);
}

void check_orthonormal(const Subspace& s, const std::string& what, std::vector<std::string>& out) {
  if (s.dim() == 0) return;
  const double err =
      (s.basis().transpose() * s.basis() - Eigen::MatrixXd::Identity(s.dim(), s.dim())).cwiseAbs().maxCoeff();
  if (err > kOrthonormalTolerance) out.push_back(what + ": basis not orthonormal (" + format_double(err) + ")");
}

// Distances recomputed from the CSV files must reproduce the reported ones.
void check_recomputable(const std::filesystem::path& recovered, const Subspace& truth, const json& reported,
                        const std::string& what, std::vector<std::string>& out) {
  if (reported.is_null()) return;
  const Subspace back = read_subspace_csv(recovered);
  const double d = subspace_distance(back, truth);
  if (std::abs(d - reported.get<double>()) > 1e-10)
    out.push_back(what + ": distance not recomputable from " + recovered.filename().string());
}

json marginal_diagnostics(const SampleSet& s, const Subspace& dirs, const DescentConfig& dc, int r, double D) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < dirs.dim(); ++i) {
    const Eigen::VectorXd m = s.data() * dirs.basis().col(i);
    const std::span<const double> sp(m.data(), static_cast<std::size_t>(m.size()));
    json e;
    e["entropy_estimate"] = relative_entropy_averaged(sp, dc.entropy_cfg, dc.grad_repeats);
    e["gap_report"] = to_json(detect_gap(empirical_moments(sp, r), D));
    arr.push_back(std::move(e));
  }
  return arr;
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& cfg) {
  const auto t_start = Clock::now();
  RunReport out;
  out.output_dir = cfg.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create output directory " + cfg.output_dir.string());
  const auto subspace_dir = cfg.output_dir / "subspaces";

  const Rng master(cfg.seed);
  Rng inst_rng = master.substream(1);
  Rng sample_rng = master.substream(2);
  Rng algo_rng = master.substream(3);

  std::vector<NonGaussianLaw> laws;
  for (const auto& l : cfg.instance.laws) laws.push_back(NonGaussianLaw::make(l.kind, l.params));
  const NgcaInstance inst = synthesize_instance(cfg.instance.n, cfg.instance.p, laws, cfg.instance.r, inst_rng);
  const SampleSet raw = draw_samples(inst, static_cast<Eigen::Index>(cfg.N), sample_rng);
  const IsotropizeResult iso = isotropize(raw);
  const Eigen::MatrixXd& T = iso.transform;
  const Subspace truth_ng = inst.nongaussian();
  const double D = inst.D.value_or(FullConfig{}.D_hint);

  json& rep = out.report;
  rep["schema_version"] = kConfigSchemaVersion;
  rep["version"] = kNgcaVersion;
  rep["seed"] = cfg.seed;
  rep["config_hash"] = config_hash(cfg);
  rep["config"] = to_json(cfg);
  json laws_json = json::array();
  for (const auto& l : inst.laws) laws_json.push_back({{"kind", to_string(l.kind())}, {"params", l.params()}});
  rep["instance"] = {{"n", inst.n}, {"p", inst.p}, {"q", inst.q}, {"r", inst.r},
                     {"D", inst.D ? json(*inst.D) : json(nullptr)}, {"K", inst.K()}, {"laws", laws_json}};
  rep["ground_truth"] = {{"gaussian", matrix_to_json(inst.gamma.basis())},
                         {"nongaussian", matrix_to_json(truth_ng.basis())}};
  rep["whitening"] = {{"mean", matrix_to_json(iso.mean)}, {"transform", matrix_to_json(T)}};
  rep["timing_file"] = "timing.json";
  rep["methods"] = json::object();
  out.timing["sampling_seconds"] = seconds_since(t_start);

  if (cfg.write_csv) {
    write_subspace_csv(inst.gamma, subspace_dir / "ground_truth_gaussian.csv");
    write_subspace_csv(truth_ng, subspace_dir / "ground_truth_nongaussian.csv");
  }

  json comparison = json::array();
  const bool run_entropy = cfg.method != Method::Cumulant;
  const bool run_cumulant = cfg.method != Method::EntropyDescent;

  if (run_entropy) {
    const FullConfig fc = resolve_full_config(cfg, D, inst.K());
    const auto t0 = Clock::now();
    const NgcaResult res = full_alg(iso.samples, fc, algo_rng);
    out.timing["entropy_descent_seconds"] = seconds_since(t0);

    const Subspace ng = to_original(res.nongaussian_subspace, T);
    const Subspace g = to_original(res.gaussian_span(), T);
    json m = to_json(res);
    m["recovered_nongaussian"] = matrix_to_json(ng.basis());
    m["recovered_gaussian"] = matrix_to_json(g.basis());
    m["recovered_nongaussian_dim"] = ng.dim();
    m["distance"] = distance_or_null(ng, truth_ng);
    m["gaussian_distance"] = distance_or_null(g, inst.gamma);
    m["nongaussian_marginals"] = marginal_diagnostics(iso.samples, res.nongaussian_subspace, fc.descent, inst.r, D);
    m["gaussian_marginals"] = marginal_diagnostics(iso.samples, res.gaussian_span(), fc.descent, inst.r, D);

    check_orthonormal(res.nongaussian_subspace, "entropy_descent", out.violations);
    check_orthonormal(res.gaussian_span(), "entropy_descent gaussian directions", out.violations);
    if (static_cast<Eigen::Index>(res.gaussian_directions.size()) + res.nongaussian_subspace.dim() != inst.n)
      out.violations.push_back("entropy_descent: Gaussian and non-Gaussian parts do not span R^n");
    if (res.gaussian_directions.size() > 0 && res.nongaussian_subspace.dim() > 0) {
      const double cross =
          (res.gaussian_span().basis().transpose() * res.nongaussian_subspace.basis()).cwiseAbs().maxCoeff();
      if (cross > 1e-8) out.violations.push_back("entropy_descent: parts not orthogonal");
    }
    if (cfg.write_csv) {
      write_subspace_csv(ng, subspace_dir / "entropy_descent_nongaussian.csv");
      write_subspace_csv(g, subspace_dir / "entropy_descent_gaussian.csv");
      write_level_traces(res, T, inst.gamma, cfg.output_dir / "traces", "entropy_descent");
      check_recomputable(subspace_dir / "entropy_descent_nongaussian.csv", truth_ng, m["distance"],
                         "entropy_descent", out.violations);
    }
    comparison.push_back({{"method", "entropy_descent"}, {"distance", m["distance"]},
                          {"recovered_nongaussian_dim", ng.dim()}});
    rep["methods"]["entropy_descent"] = std::move(m);
  }

  if (run_cumulant) {
    const auto t0 = Clock::now();
    const CumulantKernelResult cr = cumulant_kernel(iso.samples, cfg.cumulant.orders, cfg.cumulant.kernel_tol);
    out.timing["cumulant_seconds"] = seconds_since(t0);

    const Subspace ng_w = orthogonal_complement(cr.gaussian);
    const Subspace ng = to_original(ng_w, T);
    const Subspace g = to_original(cr.gaussian, T);
    json m = to_json(cr.report);
    m["recovered_nongaussian"] = matrix_to_json(ng.basis());
    m["recovered_gaussian"] = matrix_to_json(g.basis());
    m["recovered_nongaussian_dim"] = ng.dim();
    m["distance"] = distance_or_null(ng, truth_ng);
    m["gaussian_distance"] = distance_or_null(g, inst.gamma);

    const double lam_max = cr.report.eigvals.size() ? cr.report.eigvals.maxCoeff() : 0.0;
    if (cr.report.eigvals.size() && cr.report.eigvals.minCoeff() < -1e-8 * std::max(1.0, lam_max))
      out.violations.push_back("cumulant: Gram matrix not positive semidefinite");
    check_orthonormal(cr.gaussian, "cumulant", out.violations);
    if (cfg.write_csv) {
      write_subspace_csv(ng, subspace_dir / "cumulant_nongaussian.csv");
      write_subspace_csv(g, subspace_dir / "cumulant_gaussian.csv");
      write_spectrum_csv(cr.report, cfg.output_dir / "spectra" / "cumulant.csv");
      check_recomputable(subspace_dir / "cumulant_nongaussian.csv", truth_ng, m["distance"], "cumulant",
                         out.violations);
    }
    comparison.push_back({{"method", "cumulant"}, {"distance", m["distance"]},
                          {"recovered_nongaussian_dim", ng.dim()}});
    rep["methods"]["cumulant"] = std::move(m);
  }

  rep["comparison"] = std::move(comparison);
  rep["invariant_violations"] = out.violations;
  out.timing["total_seconds"] = seconds_since(t_start);

  auto write_json = [&](const json& j, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) fail(ErrorCode::IoError, "cannot write " + path.string());
    os << j.dump(2) << '\n';
  };
  write_json(rep, cfg.output_dir / "report.json");
  write_json(out.timing, cfg.output_dir / "timing.json");
  return out;
}

RunReport run_experiment(const std::filesystem::path& config_path, std::optional<std::uint64_t> seed_override) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  if (seed_override) cfg.seed = *seed_override;
  return run_experiment(cfg);
}

}  // namespace ngca
