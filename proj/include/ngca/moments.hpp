#pragma once

#include <optional>
#include <span>
#include <vector>

namespace ngca {

// Raw moments of orders 1..order_max of a 1-D sample. Index k of `values`
// holds M_k; index 0 is unused and set to 1.
struct MomentVector {
  int order_max = 0;
  std::vector<double> values;
  std::vector<double> std_errors;
  std::size_t N = 0;

  double value(int k) const { return values.at(static_cast<std::size_t>(k)); }
  double std_error(int k) const { return std_errors.at(static_cast<std::size_t>(k)); }
};

struct GapReport {
  std::optional<int> k_star;
  double gap = 0.0;
  double D_threshold = 0.0;
  std::vector<double> all_gaps;  // orders 3..r, index 0 ↔ order 3
};

// Requires N >= 30 and 1 <= r <= 12.
MomentVector empirical_moments(std::span<const double> samples, int r);

// E[Z^k] for standard normal Z: 0 for odd k, (k−1)!! for even k.
double gaussian_moment(int k);

double binomial(int n, int k);

/// Exact moment gap M_k(W) − M_k(Z) of W = s·Y + √(1−s²)·Z, where
/// s = `signal_coeff` is the weight on the non-Gaussian variable Y and
/// `moments_y[j]` = M_j(Y) for j = 0..k (M_1 = 0, M_2 = 1 expected).
double moment_mixing(std::span<const double> moments_y, double signal_coeff, int k);

// Same quantity with W = √(1−t²)·Y + t·Z, `noise_coeff` = t.
double moment_mixing_noise(std::span<const double> moments_y, double noise_coeff, int k);

struct SmoothedGap {
  double value = 0.0;      // max(0, D((1−t²)^{k/2} − t(1−t²)^{3/2}(1+√(k−3))^k))
  double bernoulli = 0.0;  // D(1 − k t²/2 − t k^{k/2}), unclipped
};

// Lower bound on the k-th moment gap that survives smoothing with noise t.
SmoothedGap predicted_smoothed_gap(double D, int k, double noise_coeff);

// Smallest k in [3, r] whose gap exceeds D by 4 standard errors.
GapReport detect_gap(const MomentVector& mv, double D);

// A = 4r²K(3 + log(K/D)).
double moment_scale_A(double D, double K, int r);

// 5·A·r!·(eps/D²)^{1/(2r)}: non-Gaussian weight bound for a direction whose
// relative entropy is at most eps.
double entropy_decay_bound(double eps, double D, int r, double K);

// Conversions between raw moments and cumulants; index 0 unused.
std::vector<double> moments_to_cumulants(std::span<const double> moments);
std::vector<double> cumulants_to_moments(std::span<const double> cumulants);

}  // namespace ngca
