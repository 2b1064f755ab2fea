#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace ngca {

struct SuiteResult {
  std::string name;
  int checks = 0;
  int failures = 0;
  std::map<std::string, double> stats;
  std::vector<std::string> messages;  // one per failed check (capped)

  bool passed() const noexcept { return failures == 0 && checks > 0; }
};

struct PropertySummary {
  std::vector<SuiteResult> suites;

  bool all_passed() const;
};

// subspace_metric, entropy_scaling, moment_mixing, perturbation_bound,
// spherical_concentration, cumulant_equivariance.
const std::vector<std::string>& property_suite_names();

/// Runs the named suite, or every suite for "all"/"". Throws InvalidArgument for
/// an unknown name. Failures are results, not exceptions.
PropertySummary run_property_suite(const std::string& selector, std::uint64_t seed = 20240601);

SuiteResult run_subspace_metric_suite(std::uint64_t seed, int cases = 100);
SuiteResult run_entropy_scaling_suite(std::uint64_t seed);
SuiteResult run_moment_mixing_suite(std::uint64_t seed, long N = 1'000'000);
SuiteResult run_perturbation_bound_suite(std::uint64_t seed, int trials = 200);
SuiteResult run_spherical_concentration_suite(std::uint64_t seed, int n = 20, long draws = 100'000);
SuiteResult run_cumulant_equivariance_suite(std::uint64_t seed);

// Pr[|⟨r, v⟩| >= alpha] for r uniform on S^{n−1}: the normalized cap volume
// ∫_α^1 (1−x²)^{(n−3)/2} dx / ∫_0^1 (1−x²)^{(n−3)/2} dx, by quadrature.
double spherical_cap_probability(int n, double alpha);

nlohmann::json to_json(const PropertySummary& s);

}  // namespace ngca
