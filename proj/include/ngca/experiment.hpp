#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ngca/deflation.hpp"
#include "ngca/laws.hpp"

namespace ngca {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr const char* kNgcaVersion = "0.1.0";

enum class Method { EntropyDescent, Cumulant, Both };

std::string_view to_string(Method m);

struct LawSpec {
  LawKind kind = LawKind::Uniform;
  std::vector<double> params;
};

struct InstanceSpec {
  int n = 0;
  int p = 0;
  int r = 4;
  std::vector<LawSpec> laws;  // q = n − p entries
};

// Keys of the "solver" block that were set explicitly; unset keys keep the
// value produced by default_full_config for the run's N, n, D and K.
struct SolverOverrides {
  std::optional<double> eta, eps1, eps2, fd_step_h, noise_t_prime, D_hint, K_hint;
  std::optional<double> truncation_A, bucket_width_B;
  std::optional<int> max_iters, grad_repeats, restarts_per_level;
};

struct CumulantOptions {
  std::vector<int> orders{3, 4};
  double kernel_tol = 0.05;
};

struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  InstanceSpec instance;
  std::int64_t N = 0;
  std::uint64_t seed = 0;
  Method method = Method::EntropyDescent;
  SolverOverrides solver;
  CumulantOptions cumulant;
  std::filesystem::path output_dir = "ngca_out";
  bool write_csv = true;
};

// Throws ConfigError (code ConfigInvalid) naming the offending key path, e.g.
// "/instance/laws/1/kind". Unknown keys are rejected.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

// Seed from the NGCA_SEED environment variable, if set and valid.
std::optional<std::uint64_t> seed_from_env();

// FNV-1a 64 over the canonical (sorted-key) dump of the config, hex encoded.
std::string config_hash(const ExperimentConfig& cfg);

FullConfig resolve_full_config(const ExperimentConfig& cfg, double D, double K);

struct RunReport {
  nlohmann::json report;                  // contents of report.json (deterministic)
  nlohmann::json timing;                  // contents of timing.json
  std::vector<std::string> violations;    // invariant violations found while running
  std::filesystem::path output_dir;

  bool ok() const noexcept { return violations.empty(); }
};

/// Synthesizes the configured instance, draws and whitens samples, runs the
/// selected method(s) and writes report.json, timing.json, traces/*.csv and
/// subspaces/*.csv into the output directory. All randomness flows from the
/// config seed, so two runs of the same config give identical report.json.
RunReport run_experiment(const ExperimentConfig& cfg);
RunReport run_experiment(const std::filesystem::path& config_path,
                         std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace ngca
