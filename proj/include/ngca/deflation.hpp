#pragma once

#include <optional>
#include <vector>

#include "ngca/descent.hpp"
#include "ngca/sample_set.hpp"
#include "ngca/subspace.hpp"

namespace ngca {

struct FullConfig {
  DescentConfig descent;
  double noise_t_prime = 0.03;
  int restarts_per_level = 5;
  double D_hint = 0.5;
  double K_hint = 2.0;
  int r = 4;
  double eps_target = 0.35;

  void validate() const;
};

struct Thresholds {
  double eps1 = 0.0;
  double eps2 = 0.0;
  double A = 0.0;         // 4r²K(3 + log(K/D))
  double raw_eps2 = 0.0;  // 0.5·D²·A^{−2r} before flooring
};

inline constexpr double kEps2Floor = 1e-4;

// eps2 = max(0.5 D² A^{−2r}, floor), eps1 = eps2/10. `n` is accepted for
// interface parity; the recipe does not depend on it.
Thresholds termination_thresholds(double D, double K, int r, int n, double floor = kEps2Floor);

// Plug-in bias scale of the histogram estimator on Gaussian data:
// (occupied buckets)/(2N) with the occupied range taken as ±√(2 log N).
double estimator_bias_scale(std::size_t N, double bucket_width_B);

/// Accept thresholds usable against a finite-sample estimator. Starts from
/// termination_thresholds and raises eps2 to 2.5× and eps1 to 5× the
/// estimator bias scale, which is where Gaussian directions actually land.
Thresholds practical_thresholds(double D, double K, int r, int n, std::size_t N,
                                const HistogramConfig& cfg);

// FullConfig for N samples: histogram from default_config, noise from
// noise_level(r), thresholds from practical_thresholds.
FullConfig default_full_config(std::size_t N, int n, double D_hint = 0.5, double K_hint = 2.0,
                               int r = 4);

// Positive root of (r/2)t² + r^{r/2}t − 1/2 = 0, clipped to [0.01, 0.3].
double noise_level(int r);
// The unclipped root.
double noise_level_root(int r);

struct LevelDiagnostics {
  int level = 0;
  Eigen::Index ambient_dim = 0;   // dimension searched at this level
  int restarts_used = 0;
  bool accepted = false;
  double eps1 = 0.0;
  double eps2 = 0.0;
  std::vector<double> restart_final_entropy;
  std::vector<double> restart_final_grad_norm;
  DescentOutcome outcome;         // accepted run, or the last failed one
  Eigen::MatrixXd level_basis;    // n×ambient_dim: level coordinates → input coordinates
};

struct NgcaResult {
  std::vector<UnitVector> gaussian_directions;  // in input coordinates
  Subspace nongaussian_subspace;
  std::vector<LevelDiagnostics> levels;
  FullConfig config_used;
  SampleSet smoothed;  // the smoothed input all levels were cut from

  Subspace gaussian_span() const;
};

/// Smooths once with noise_t_prime, then repeatedly runs grad_des on the
/// current deflated samples (up to restarts_per_level starts per level). An
/// accepted direction is mapped back to input coordinates and projected out;
/// a level where no start is accepted ends the search. The remaining basis is
/// returned as the non-Gaussian subspace.
NgcaResult full_alg(const SampleSet& s, const FullConfig& cfg, Rng& rng);

}  // namespace ngca
