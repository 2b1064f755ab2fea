#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "ngca/cumulant.hpp"
#include "ngca/deflation.hpp"
#include "ngca/moments.hpp"
#include "ngca/subspace.hpp"

namespace ngca {

// JSON views of result types. Doubles are emitted as-is (nlohmann prints the
// shortest round-tripping representation), so serialized values reload exactly.
nlohmann::json to_json(const GapReport& g);
nlohmann::json to_json(const CumulantGram& g);
nlohmann::json to_json(const LevelDiagnostics& l);
nlohmann::json to_json(const NgcaResult& r);
nlohmann::json to_json(const FullConfig& c);
nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);  // row-major nested arrays

// Writes the descent trace of every level as traces/<prefix>_level<L>.csv with
// columns iter, grad_norm, entropy, eta, u_proj_gamma. u_proj_gamma is the norm
// of the projection of the current iterate (mapped through `to_original`) onto
// `gamma`, or empty when no ground truth is known.
void write_level_traces(const NgcaResult& r, const Eigen::MatrixXd& to_original,
                        const std::optional<Subspace>& gamma, const std::filesystem::path& dir,
                        const std::string& prefix);

// subspaces/<name>.csv holding the basis matrix (n rows, dim columns).
void write_subspace_csv(const Subspace& s, const std::filesystem::path& path);
Subspace read_subspace_csv(const std::filesystem::path& path);

// index, eigenvalue.
void write_spectrum_csv(const CumulantGram& g, const std::filesystem::path& path);

std::string fnv1a_hex(std::string_view bytes);

}  // namespace ngca
