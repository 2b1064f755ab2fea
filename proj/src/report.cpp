#include "ngca/report.hpp"

#include <cstdio>
#include <fstream>

#include "ngca/error.hpp"
#include "ngca/sample_io.hpp"

namespace ngca {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

json vec(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

// JSON has no inf; emit null instead.
json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json to_json(const GapReport& g) {
  json j;
  j["k_star"] = g.k_star ? json(*g.k_star) : json(nullptr);
  j["gap"] = g.gap;
  j["D_threshold"] = g.D_threshold;
  j["all_gaps"] = g.all_gaps;
  return j;
}

json to_json(const CumulantGram& g) {
  json j;
  j["order_set"] = g.order_set;
  j["eigvals"] = vec(g.eigvals);
  j["noise_floor"] = g.noise_floor;
  j["threshold"] = g.threshold;
  j["kernel_dim"] = g.kernel_dim;
  j["spectral_gap_ratio"] = finite_or_null(g.spectral_gap_ratio);
  j["reliable"] = g.reliable;
  return j;
}

json to_json(const LevelDiagnostics& l) {
  json j;
  j["level"] = l.level;
  j["ambient_dim"] = l.ambient_dim;
  j["accepted"] = l.accepted;
  j["restarts_used"] = l.restarts_used;
  j["eps1"] = l.eps1;
  j["eps2"] = l.eps2;
  j["restart_final_entropy"] = l.restart_final_entropy;
  j["restart_final_grad_norm"] = l.restart_final_grad_norm;
  j["final_entropy"] = l.outcome.final_entropy;
  j["final_grad_norm"] = l.outcome.final_grad_norm;
  j["iterations_used"] = l.outcome.iterations_used;
  j["direction"] = l.outcome.direction ? vec(l.outcome.direction->coords()) : json(nullptr);
  return j;
}

json to_json(const FullConfig& c) {
  json j;
  j["eta"] = c.descent.eta;
  j["eps1"] = c.descent.eps1;
  j["eps2"] = c.descent.eps2;
  j["max_iters"] = c.descent.max_iters;
  j["fd_step_h"] = c.descent.fd_step_h;
  j["grad_repeats"] = c.descent.grad_repeats;
  j["halve_on_increase"] = c.descent.halve_on_increase;
  j["histogram"] = {{"truncation_A", c.descent.entropy_cfg.truncation_A},
                    {"bucket_width_B", c.descent.entropy_cfg.bucket_width_B},
                    {"min_count_floor", c.descent.entropy_cfg.min_count_floor}};
  j["noise_t_prime"] = c.noise_t_prime;
  j["restarts_per_level"] = c.restarts_per_level;
  j["D_hint"] = c.D_hint;
  j["K_hint"] = c.K_hint;
  j["r"] = c.r;
  return j;
}

json to_json(const NgcaResult& r) {
  json j;
  json dirs = json::array();
  for (const auto& u : r.gaussian_directions) dirs.push_back(vec(u.coords()));
  j["gaussian_directions"] = std::move(dirs);
  j["nongaussian_dim"] = r.nongaussian_subspace.dim();
  j["levels"] = json::array();
  for (const auto& l : r.levels) j["levels"].push_back(to_json(l));
  j["config_used"] = to_json(r.config_used);
  return j;
}

void write_level_traces(const NgcaResult& r, const Eigen::MatrixXd& to_original,
                        const std::optional<Subspace>& gamma, const std::filesystem::path& dir,
                        const std::string& prefix) {
  std::filesystem::create_directories(dir);
  for (const auto& level : r.levels) {
    const auto path = dir / (prefix + "_level" + std::to_string(level.level) + ".csv");
    std::ofstream os(path);
    if (!os) fail(ErrorCode::IoError, "cannot write " + path.string());
    os << "iter,grad_norm,entropy,eta,u_proj_gamma\n";
    for (const auto& e : level.outcome.trace) {
      os << e.iter << ',' << format_double(e.grad_norm) << ',' << format_double(e.entropy) << ','
         << format_double(e.eta) << ',';
      if (gamma) {
        const Eigen::VectorXd v = to_original * (level.level_basis * e.direction);
        os << format_double(project(*gamma, v).norm() / v.norm());
      }
      os << '\n';
    }
  }
}

void write_subspace_csv(const Subspace& s, const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path());
  write_matrix_csv(s.basis(), path);
}

Subspace read_subspace_csv(const std::filesystem::path& path) {
  // A zero-dimensional subspace is stored as n empty lines.
  {
    std::ifstream is(path);
    if (!is) fail(ErrorCode::IoError, "cannot open " + path.string());
    std::string line;
    Eigen::Index lines = 0;
    bool any = false;
    while (std::getline(is, line)) {
      ++lines;
      any = any || line.find_first_not_of(" \t\r") != std::string::npos;
    }
    if (!any) return Subspace::zero(lines);
  }
  return Subspace::from_orthonormal(ingest_csv(path, false).data());
}

void write_spectrum_csv(const CumulantGram& g, const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) fail(ErrorCode::IoError, "cannot write " + path.string());
  os << "index,eigenvalue\n";
  for (Eigen::Index i = 0; i < g.eigvals.size(); ++i) os << i << ',' << format_double(g.eigvals(i)) << '\n';
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ngca
