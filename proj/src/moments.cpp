#include "ngca/moments.hpp"

#include <cmath>

#include "ngca/error.hpp"

namespace ngca {

MomentVector empirical_moments(std::span<const double> samples, int r) {
  if (samples.size() < 30) fail(ErrorCode::InvalidArgument, "empirical_moments needs N >= 30");
  if (r < 1 || r > 12) fail(ErrorCode::InvalidArgument, "moment order must be in [1, 12]");

  const auto rr = static_cast<std::size_t>(r);
  std::vector<double> sum(rr + 1, 0.0);
  std::vector<double> sum_sq(rr + 1, 0.0);
  for (const double x : samples) {
    double p = 1.0;
    for (std::size_t k = 1; k <= rr; ++k) {
      p *= x;
      sum[k] += p;
      sum_sq[k] += p * p;
    }
  }

  const double n = static_cast<double>(samples.size());
  MomentVector mv;
  mv.order_max = r;
  mv.N = samples.size();
  mv.values.assign(rr + 1, 1.0);
  mv.std_errors.assign(rr + 1, 0.0);
  for (std::size_t k = 1; k <= rr; ++k) {
    const double mean = sum[k] / n;
    // Unbiased sample variance of x^k.
    const double var = std::max(0.0, (sum_sq[k] - n * mean * mean) / (n - 1.0));
    mv.values[k] = mean;
    mv.std_errors[k] = std::sqrt(var / n);
  }
  return mv;
}

double gaussian_moment(int k) {
  if (k < 0) fail(ErrorCode::InvalidArgument, "moment order must be nonnegative");
  if (k % 2 == 1) return 0.0;
  double m = 1.0;
  for (int j = k - 1; j > 1; j -= 2) m *= j;
  return m;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int j = 1; j <= k; ++j) c = c * (n - k + j) / j;
  return std::round(c);
}

double moment_mixing(std::span<const double> moments_y, double signal_coeff, int k) {
  if (k < 0 || moments_y.size() <= static_cast<std::size_t>(k))
    fail(ErrorCode::InvalidArgument, "moments_y must cover orders 0..k");
  if (signal_coeff < 0.0 || signal_coeff > 1.0)
    fail(ErrorCode::InvalidArgument, "signal coefficient must be in [0, 1]");
  const double t = signal_coeff;
  const double s = std::sqrt(1.0 - t * t);
  double total = 0.0;
  for (int j = 1; j <= k; ++j) {
    const double gap = moments_y[static_cast<std::size_t>(j)] - gaussian_moment(j);
    if (gap == 0.0) continue;
    total += binomial(k, j) * std::pow(t, j) * gap * std::pow(s, k - j) * gaussian_moment(k - j);
  }
  return total;
}

double moment_mixing_noise(std::span<const double> moments_y, double noise_coeff, int k) {
  if (noise_coeff < 0.0 || noise_coeff > 1.0)
    fail(ErrorCode::InvalidArgument, "noise coefficient must be in [0, 1]");
  return moment_mixing(moments_y, std::sqrt(1.0 - noise_coeff * noise_coeff), k);
}

SmoothedGap predicted_smoothed_gap(double D, int k, double noise_coeff) {
  if (k < 3) fail(ErrorCode::InvalidArgument, "smoothed gap needs k >= 3");
  if (noise_coeff < 0.0 || noise_coeff >= 1.0)
    fail(ErrorCode::InvalidArgument, "noise coefficient must be in [0, 1)");
  const double t = noise_coeff;
  const double one_minus = 1.0 - t * t;
  const double growth = std::pow(1.0 + std::sqrt(static_cast<double>(k - 3)), k);
  const double exact =
      std::pow(one_minus, 0.5 * k) - t * std::pow(one_minus, 1.5) * growth;
  SmoothedGap g;
  g.value = std::max(0.0, D * exact);
  g.bernoulli = D * (1.0 - 0.5 * k * t * t - t * std::pow(static_cast<double>(k), 0.5 * k));
  return g;
}

GapReport detect_gap(const MomentVector& mv, double D) {
  GapReport report;
  report.D_threshold = D;
  for (int k = 3; k <= mv.order_max; ++k) {
    const double gap = std::abs(mv.value(k) - gaussian_moment(k));
    report.all_gaps.push_back(gap);
    if (!report.k_star && gap - 4.0 * mv.std_error(k) >= D) {
      report.k_star = k;
      report.gap = gap;
    }
  }
  return report;
}

double moment_scale_A(double D, double K, int r) {
  return 4.0 * r * r * K * (3.0 + std::log(K / D));
}

double entropy_decay_bound(double eps, double D, int r, double K) {
  if (!(eps > 0.0) || !(D > 0.0) || r <= 0 || !(K > 0.0))
    fail(ErrorCode::InvalidArgument, "entropy_decay_bound needs positive arguments");
  const double a = moment_scale_A(D, K, r);
  return 5.0 * a * std::tgamma(r + 1.0) * std::pow(eps / (D * D), 1.0 / (2.0 * r));
}

std::vector<double> moments_to_cumulants(std::span<const double> moments) {
  const std::size_t r = moments.empty() ? 0 : moments.size() - 1;
  std::vector<double> kappa(r + 1, 0.0);
  for (std::size_t n = 1; n <= r; ++n) {
    double acc = moments[n];
    for (std::size_t m = 1; m < n; ++m)
      acc -= binomial(static_cast<int>(n - 1), static_cast<int>(m - 1)) * kappa[m] * moments[n - m];
    kappa[n] = acc;
  }
  return kappa;
}

std::vector<double> cumulants_to_moments(std::span<const double> cumulants) {
  const std::size_t r = cumulants.empty() ? 0 : cumulants.size() - 1;
  std::vector<double> m(r + 1, 0.0);
  m[0] = 1.0;
  for (std::size_t n = 1; n <= r; ++n) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= n; ++j)
      acc += binomial(static_cast<int>(n - 1), static_cast<int>(j - 1)) * cumulants[j] * m[n - j];
    m[n] = acc;
  }
  return m;
}

}  // namespace ngca
