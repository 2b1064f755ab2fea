#include "ngca/entropy.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ngca/error.hpp"
#include "ngca/quadrature.hpp"

namespace ngca {

namespace {

const double kLogSqrtTwoPi = 0.5 * std::log(2.0 * std::numbers::pi);

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

struct Grid {
  double lo = 0.0;  // left edge of bucket 0
  std::size_t buckets = 0;
};

Grid make_grid(const HistogramConfig& cfg) {
  Grid g;
  g.lo = -cfg.truncation_A - cfg.offset;
  g.buckets = static_cast<std::size_t>(std::ceil((2.0 * cfg.truncation_A + cfg.offset) /
                                                 cfg.bucket_width_B)) + 1;
  return g;
}

// Counts per bucket; returns the number of samples inside [−A, A].
std::size_t fill_counts(std::span<const double> samples, const HistogramConfig& cfg,
                        const Grid& grid, std::vector<std::uint32_t>& counts) {
  counts.assign(grid.buckets, 0);
  const double A = cfg.truncation_A;
  const double inv_b = 1.0 / cfg.bucket_width_B;
  std::size_t inside = 0;
  for (const double x : samples) {
    if (!(std::abs(x) <= A)) continue;
    const auto idx = static_cast<std::size_t>((x - grid.lo) * inv_b);
    ++counts[std::min(idx, grid.buckets - 1)];
    ++inside;
  }
  return inside;
}

void check_samples(std::span<const double> samples) {
  if (samples.size() < 100) fail(ErrorCode::InvalidArgument, "entropy estimation needs N >= 100");
}

double variance(std::span<const double> samples) {
  double mean = 0.0;
  for (const double x : samples) mean += x;
  mean /= static_cast<double>(samples.size());
  double acc = 0.0;
  for (const double x : samples) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(samples.size());
}

}  // namespace

void HistogramConfig::validate() const {
  if (!(truncation_A > 0.0) || !(bucket_width_B > 0.0))
    fail(ErrorCode::InvalidArgument, "histogram needs A > 0 and B > 0");
  if (truncation_A / bucket_width_B > 1e7)
    fail(ErrorCode::InvalidArgument, "A/B exceeds the 1e7 bucket guard");
  if (!(offset >= 0.0 && offset < bucket_width_B))
    fail(ErrorCode::InvalidArgument, "grid offset must lie in [0, B)");
}

double estimate_plogp(std::span<const double> samples, const HistogramConfig& cfg) {
  check_samples(samples);
  cfg.validate();
  const Grid grid = make_grid(cfg);
  std::vector<std::uint32_t> counts;
  if (fill_counts(samples, cfg, grid, counts) == 0)
    fail(ErrorCode::AllSamplesTruncated, "no sample lies in [-A, A]");

  const double n = static_cast<double>(samples.size());
  const double log_nb = std::log(n * cfg.bucket_width_B);
  const std::size_t floor = std::max<std::size_t>(cfg.min_count_floor, 1);
  double total = 0.0;
  for (const std::uint32_t c : counts) {
    if (c < floor) continue;
    const double cd = static_cast<double>(c);
    total += cd * (std::log(cd) - log_nb);
  }
  return total / n;
}

EntropyEstimate relative_entropy(std::span<const double> samples, const HistogramConfig& cfg) {
  check_samples(samples);
  const double var = variance(samples);
  if (!(var >= 0.25 && var <= 4.0))
    fail(ErrorCode::VarianceOutOfRange,
         "sample variance " + std::to_string(var) + " outside [0.25, 4]");
  EntropyEstimate est;
  est.raw_integral = estimate_plogp(samples, cfg);
  est.sample_variance = var;
  est.value = est.raw_integral + 0.5 * var + kLogSqrtTwoPi;
  est.config = cfg;
  est.N = samples.size();
  return est;
}

double relative_entropy_averaged(std::span<const double> samples, const HistogramConfig& cfg,
                                 int repeats) {
  if (repeats < 1) fail(ErrorCode::InvalidArgument, "repeats must be >= 1");
  HistogramConfig shifted = cfg;
  double acc = 0.0;
  for (int j = 0; j < repeats; ++j) {
    shifted.offset = cfg.bucket_width_B * static_cast<double>(j) / repeats;
    acc += relative_entropy(samples, shifted).value;
  }
  return acc / repeats;
}

double histogram_tv_to_gaussian(std::span<const double> samples, const HistogramConfig& cfg) {
  check_samples(samples);
  cfg.validate();
  const Grid grid = make_grid(cfg);
  std::vector<std::uint32_t> counts;
  const std::size_t inside = fill_counts(samples, cfg, grid, counts);
  const double n = static_cast<double>(samples.size());
  const double A = cfg.truncation_A;
  double tv = 0.0;
  for (std::size_t i = 0; i < grid.buckets; ++i) {
    const double a = std::max(grid.lo + static_cast<double>(i) * cfg.bucket_width_B, -A);
    const double b = std::min(grid.lo + static_cast<double>(i + 1) * cfg.bucket_width_B, A);
    if (b <= a) continue;
    const double gauss = standard_normal_cdf(b) - standard_normal_cdf(a);
    tv += std::abs(counts[i] / n - gauss);
  }
  const double outside_emp = static_cast<double>(samples.size() - inside) / n;
  const double outside_gauss = 2.0 * standard_normal_cdf(-A);
  tv += std::abs(outside_emp - outside_gauss);
  return 0.5 * tv;
}

std::size_t counted_samples(std::span<const double> samples, const HistogramConfig& cfg) {
  cfg.validate();
  std::size_t inside = 0;
  for (const double x : samples)
    if (std::abs(x) <= cfg.truncation_A) ++inside;
  return inside;
}

double analytic_relative_entropy(const EntropyTarget& target) {
  if (const auto* sg = std::get_if<ScaledGaussian>(&target)) {
    if (!(sg->lambda > 0.0)) fail(ErrorCode::InvalidArgument, "scale must be positive");
    return -std::log(sg->lambda) + 0.5 * (sg->lambda * sg->lambda - 1.0);
  }
  const auto& law = std::get<NonGaussianLaw>(target);
  auto integrand = [&law](double x) {
    const double f = law.density(x);
    if (!(f > 0.0)) return 0.0;
    return f * (std::log(f) + 0.5 * x * x + kLogSqrtTwoPi);
  };
  const auto bp = law.integration_breakpoints();
  return integrate(integrand, bp, 1e-8).value;
}

HistogramConfig default_config(std::size_t N, double K, double t) {
  if (N < 1000) fail(ErrorCode::InvalidArgument, "default_config needs N >= 1000");
  if (!(K >= 1.0)) fail(ErrorCode::InvalidArgument, "default_config needs K >= 1");
  if (!(t > 0.0 && t < 1.0)) fail(ErrorCode::InvalidArgument, "default_config needs 0 < t < 1");
  const double n = static_cast<double>(N);
  HistogramConfig cfg;
  cfg.truncation_A = K * std::sqrt(2.0 * std::log(n)) + 2.0;
  cfg.bucket_width_B = std::clamp(std::cbrt(1.0 / n), 1e-4, 0.2);
  cfg.min_count_floor = 1;
  return cfg;
}

}  // namespace ngca
