// ngca — command-line front end: run experiments, property suites, instance
// generation and CSV ingestion.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ngca/error.hpp"
#include "ngca/experiment.hpp"
#include "ngca/instance.hpp"
#include "ngca/properties.hpp"
#include "ngca/report.hpp"
#include "ngca/sample_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvariant = 2;
constexpr int kExitConfig = 3;

using nlohmann::json;

int cmd_run(const std::string& config_path) {
  auto cfg = ngca::load_experiment_config(config_path);
  if (auto s = ngca::seed_from_env()) cfg.seed = *s;
  const auto rep = ngca::run_experiment(cfg);
  std::cout << "report: " << (rep.output_dir / "report.json").string() << "\n";
  for (const auto& row : rep.report.at("comparison")) {
    std::cout << row.at("method").get<std::string>() << ": d = ";
    if (row.at("distance").is_null()) std::cout << "n/a (recovered dim " << row.at("recovered_nongaussian_dim") << ")";
    else std::cout << row.at("distance").get<double>();
    std::cout << "\n";
  }
  for (const auto& v : rep.violations) std::cerr << "invariant violation: " << v << "\n";
  return rep.ok() ? kExitOk : kExitInvariant;
}

int cmd_props(const std::string& suite, std::uint64_t seed, const std::string& json_out) {
  const auto summary = ngca::run_property_suite(suite, seed);
  for (const auto& s : summary.suites) {
    std::cout << (s.passed() ? "PASS " : "FAIL ") << s.name << "  (" << s.checks - s.failures << "/" << s.checks
              << " checks)";
    for (const auto& [k, v] : s.stats) std::cout << "  " << k << "=" << v;
    std::cout << "\n";
    for (const auto& m : s.messages) std::cout << "    " << m << "\n";
  }
  if (!json_out.empty()) {
    std::ofstream os(json_out);
    if (!os) ngca::fail(ngca::ErrorCode::IoError, "cannot write " + json_out);
    os << ngca::to_json(summary).dump(2) << "\n";
  }
  return summary.all_passed() ? kExitOk : kExitInvariant;
}

// Same seed streams as `run`, so the generated samples are exactly the ones a
// run of the same config would see.
int cmd_gen_instance(const std::string& spec_path) {
  auto cfg = ngca::load_experiment_config(spec_path);
  if (auto s = ngca::seed_from_env()) cfg.seed = *s;
  const ngca::Rng master(cfg.seed);
  ngca::Rng inst_rng = master.substream(1);
  ngca::Rng sample_rng = master.substream(2);
  std::vector<ngca::NonGaussianLaw> laws;
  for (const auto& l : cfg.instance.laws) laws.push_back(ngca::NonGaussianLaw::make(l.kind, l.params));
  const auto inst = ngca::synthesize_instance(cfg.instance.n, cfg.instance.p, laws, cfg.instance.r, inst_rng);
  const auto samples = ngca::draw_samples(inst, cfg.N, sample_rng);

  const auto dir = cfg.output_dir;
  std::filesystem::create_directories(dir);
  ngca::write_samples_csv(samples, dir / "samples.csv");
  ngca::write_samples_binary(samples, dir / "samples.bin");
  ngca::write_subspace_csv(inst.gamma, dir / "subspaces" / "ground_truth_gaussian.csv");
  ngca::write_subspace_csv(inst.nongaussian(), dir / "subspaces" / "ground_truth_nongaussian.csv");
  json laws_json = json::array();
  for (const auto& l : inst.laws) laws_json.push_back({{"kind", ngca::to_string(l.kind())}, {"params", l.params()}});
  const json meta = {{"n", inst.n}, {"p", inst.p}, {"q", inst.q}, {"r", inst.r}, {"seed", cfg.seed},
                     {"N", cfg.N}, {"D", inst.D ? json(*inst.D) : json(nullptr)}, {"K", inst.K()},
                     {"laws", laws_json}, {"rotation", ngca::matrix_to_json(inst.rotation)},
                     {"config_hash", ngca::config_hash(cfg)}};
  std::ofstream os(dir / "instance.json");
  if (!os) ngca::fail(ngca::ErrorCode::IoError, "cannot write instance.json");
  os << meta.dump(2) << "\n";
  std::cout << "wrote " << samples.N() << " samples in R^" << samples.ambient_dim() << " to " << dir.string() << "\n";
  return kExitOk;
}

int cmd_ingest(const std::string& csv, bool whiten, bool header, const std::string& out_dir) {
  const auto raw = ngca::ingest_csv(csv, header);
  std::cout << "ingested N=" << raw.N() << " n=" << raw.ambient_dim() << " from " << csv << "\n";
  if (out_dir.empty() && !whiten) return kExitOk;
  const std::filesystem::path dir = out_dir.empty() ? std::filesystem::path("ngca_ingest") : std::filesystem::path(out_dir);
  std::filesystem::create_directories(dir);
  if (whiten) {
    const auto iso = ngca::isotropize(raw);
    ngca::write_samples_csv(iso.samples, dir / "whitened.csv");
    const json w = {{"source", csv}, {"N", raw.N()}, {"n", raw.ambient_dim()},
                    {"mean", ngca::matrix_to_json(iso.mean)}, {"transform", ngca::matrix_to_json(iso.transform)}};
    std::ofstream os(dir / "whitening.json");
    if (!os) ngca::fail(ngca::ErrorCode::IoError, "cannot write whitening.json");
    os << w.dump(2) << "\n";
    std::cout << "whitened samples: " << (dir / "whitened.csv").string() << "\n";
  } else {
    ngca::write_samples_csv(raw, dir / "samples.csv");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-Gaussian component analysis: entropy descent with deflation, cumulant baseline"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment from a JSON config");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();

  std::string suite = "all", props_json;
  std::uint64_t props_seed = 20240601;
  auto* props = app.add_subcommand("props", "Run property suites");
  props->add_option("suite", suite, "Suite name or 'all'");
  props->add_option("--seed", props_seed, "Seed (NGCA_SEED overrides)");
  props->add_option("--json", props_json, "Also write the summary as JSON");

  std::string spec_path;
  auto* gen = app.add_subcommand("gen-instance", "Synthesize an instance and write its samples");
  gen->add_option("spec", spec_path, "Instance spec (same schema as run configs)")->required();

  std::string csv, ingest_out;
  bool whiten = false, header = false;
  auto* ingest = app.add_subcommand("ingest", "Load a numeric CSV, optionally whitening it");
  ingest->add_option("csv", csv, "Input CSV")->required();
  ingest->add_flag("--whiten", whiten, "Center and whiten with the empirical covariance");
  ingest->add_flag("--header", header, "First line is a header");
  ingest->add_option("--out", ingest_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(config_path);
    if (*props) {
      if (auto s = ngca::seed_from_env()) props_seed = *s;
      return cmd_props(suite, props_seed, props_json);
    }
    if (*gen) return cmd_gen_instance(spec_path);
    if (*ingest) return cmd_ingest(csv, whiten, header, ingest_out);
  } catch (const ngca::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ngca::ParseError& e) {
    std::cerr << "parse error at row " << e.row() << ", column " << e.col() << ": " << e.what() << "\n";
    return kExitFailure;
  } catch (const ngca::Error& e) {
    std::cerr << "error (" << ngca::to_string(e.code()) << "): " << e.what() << "\n";
    if (e.code() == ngca::ErrorCode::InvalidArgument) return kExitConfig;
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}
