#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "ngca/rng.hpp"

namespace ngca {

enum class LawKind {
  Uniform,                   // uniform on [−√3, √3]
  LaplaceTruncated,          // Laplace truncated at ±c scale units, renormalized
  TwoPointSmoothed,          // Rademacher + N(0, σ²), rescaled
  GaussianMixtureSymmetric,  // ½N(μ, 1−μ²) + ½N(−μ, 1−μ²)
  ShiftedExponential,        // Exp(1) − 1; skewed fixture, not subgaussian
};

std::string_view to_string(LawKind kind);
LawKind law_kind_from_string(std::string_view name);

inline constexpr int kLawMomentOrder = 8;

/// One-dimensional non-Gaussian law with mean 0 and variance 1. Moments of
/// orders 0..8 are closed form; `subgaussian_K` is the smallest K >= 1 with
/// Pr[|X| >= t] <= 2 exp(−t²/K²) on a dense grid of t.
class NonGaussianLaw {
 public:
  static NonGaussianLaw uniform();
  static NonGaussianLaw laplace_truncated(double c = 5.0);
  static NonGaussianLaw two_point_smoothed(double sigma = 0.3);
  static NonGaussianLaw gaussian_mixture_symmetric(double mu = 0.9);
  static NonGaussianLaw shifted_exponential();
  static NonGaussianLaw make(LawKind kind, const std::vector<double>& params);

  LawKind kind() const noexcept { return kind_; }
  const std::vector<double>& params() const noexcept { return params_; }
  double subgaussian_K() const noexcept { return K_; }
  // analytic_moments()[k] = E[X^k], k = 0..8.
  const std::array<double, kLawMomentOrder + 1>& analytic_moments() const noexcept {
    return moments_;
  }
  // Moments of order 0..r beyond 8 are computed on demand from the closed form.
  std::vector<double> moments_up_to(int r) const;

  double sample(Rng& rng) const;
  double density(double x) const;
  // Pr[|X| >= t].
  double two_sided_tail(double t) const;
  // Interval carrying all but ~1e-16 of the mass, split at density kinks.
  std::vector<double> integration_breakpoints() const;

 private:
  NonGaussianLaw(LawKind kind, std::vector<double> params);
  double raw_moment(int k) const;

  LawKind kind_;
  std::vector<double> params_;
  double K_ = 1.0;
  std::array<double, kLawMomentOrder + 1> moments_{};
  // Derived scale constants (meaning depends on kind).
  double scale_ = 1.0;
  double aux_ = 0.0;
};

}  // namespace ngca
