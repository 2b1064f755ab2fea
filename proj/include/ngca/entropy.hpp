#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "ngca/laws.hpp"

namespace ngca {

/// Histogram on [−A, A] with buckets of width B. Bucket edges sit at
/// −A − offset + i·B; a nonzero offset (in [0, B)) shifts the grid, which is
/// how averaged estimates de-correlate bucket-boundary effects.
struct HistogramConfig {
  double truncation_A = 8.0;
  double bucket_width_B = 0.05;
  std::size_t min_count_floor = 1;  // buckets with fewer samples contribute 0
  double offset = 0.0;

  void validate() const;
};

struct EntropyEstimate {
  double value = 0.0;         // estimated S relative to N(0, 1)
  double raw_integral = 0.0;  // estimated ∫ f log f
  double sample_variance = 0.0;
  HistogramConfig config;
  std::size_t N = 0;
};

// Σ over buckets with count >= floor of (N_i/N)·log(N_i/(N·B)); samples with
// |x| > A are ignored but still count toward N. Requires N >= 100.
double estimate_plogp(std::span<const double> samples, const HistogramConfig& cfg);

// value = raw_integral + Var/2 + log √(2π), Var the variance of the full
// (untruncated) sample. Throws VarianceOutOfRange outside [0.25, 4].
EntropyEstimate relative_entropy(std::span<const double> samples, const HistogramConfig& cfg);

// Mean of relative_entropy over `repeats` grids shifted by B/repeats.
double relative_entropy_averaged(std::span<const double> samples, const HistogramConfig& cfg,
                                 int repeats);

// Total-variation distance between the histogram's bucket masses and the
// standard normal masses of the same buckets (mass outside [−A, A] included).
double histogram_tv_to_gaussian(std::span<const double> samples, const HistogramConfig& cfg);

// Number of samples that land inside [−A, A].
std::size_t counted_samples(std::span<const double> samples, const HistogramConfig& cfg);

struct ScaledGaussian {
  double lambda = 1.0;
};

using EntropyTarget = std::variant<NonGaussianLaw, ScaledGaussian>;

// Closed form −log λ + (λ²−1)/2 for scaled Gaussians; adaptive quadrature of
// ∫ f log(f/φ) to 1e-8 for laws.
double analytic_relative_entropy(const EntropyTarget& target);

// A = K·√(2 log N) + 2, B = N^{−1/3} clipped to [1e−4, 0.2], floor 1.
// `t` (smoothing level) is accepted for interface parity and does not change
// the recipe.
HistogramConfig default_config(std::size_t N, double K, double t);

}  // namespace ngca
