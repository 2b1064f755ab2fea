#include "ngca/deflation.hpp"

#include <algorithm>
#include <cmath>

#include "ngca/error.hpp"
#include "ngca/moments.hpp"

namespace ngca {

void FullConfig::validate() const {
  descent.validate();
  if (!(noise_t_prime > 0.0 && noise_t_prime < 1.0))
    fail(ErrorCode::InvalidArgument, "noise_t_prime must lie in (0, 1)");
  if (restarts_per_level < 1) fail(ErrorCode::InvalidArgument, "restarts_per_level must be >= 1");
  if (r < 3) fail(ErrorCode::InvalidArgument, "r must be >= 3");
}

Thresholds termination_thresholds(double D, double K, int r, int /*n*/, double floor) {
  if (!(D > 0.0) || !(K >= 1.0) || r < 3)
    fail(ErrorCode::InvalidArgument, "termination thresholds need D > 0, K >= 1, r >= 3");
  Thresholds t;
  t.A = moment_scale_A(D, K, r);
  t.raw_eps2 = 0.5 * D * D * std::pow(t.A, -2.0 * r);
  t.eps2 = std::max(t.raw_eps2, floor);
  t.eps1 = t.eps2 / 10.0;
  return t;
}

double estimator_bias_scale(std::size_t N, double bucket_width_B) {
  const double n = static_cast<double>(N);
  return std::sqrt(2.0 * std::log(n)) / (bucket_width_B * n);
}

Thresholds practical_thresholds(double D, double K, int r, int n, std::size_t N,
                                const HistogramConfig& cfg) {
  Thresholds t = termination_thresholds(D, K, r, n);
  const double bias = estimator_bias_scale(N, cfg.bucket_width_B);
  t.eps2 = std::max(t.eps2, 2.5 * bias);
  t.eps1 = std::max(t.eps1, 5.0 * bias);
  return t;
}

FullConfig default_full_config(std::size_t N, int n, double D_hint, double K_hint, int r) {
  FullConfig cfg;
  cfg.D_hint = D_hint;
  cfg.K_hint = K_hint;
  cfg.r = r;
  cfg.noise_t_prime = noise_level(r);
  cfg.descent.entropy_cfg = default_config(N, std::max(K_hint, 1.0), cfg.noise_t_prime);
  const Thresholds t = practical_thresholds(D_hint, K_hint, r, n, N, cfg.descent.entropy_cfg);
  cfg.descent.eps1 = t.eps1;
  cfg.descent.eps2 = t.eps2;
  return cfg;
}

double noise_level_root(int r) {
  if (r < 3) fail(ErrorCode::InvalidArgument, "noise level needs r >= 3");
  const double a = 0.5 * r;
  const double b = std::pow(static_cast<double>(r), 0.5 * r);
  const double c = -0.5;
  // Stable form of (−b + √(b² − 4ac)) / 2a for b >> |ac|.
  return (2.0 * -c) / (b + std::sqrt(b * b - 4.0 * a * c));
}

double noise_level(int r) { return std::clamp(noise_level_root(r), 0.01, 0.3); }

Subspace NgcaResult::gaussian_span() const {
  const Eigen::Index n = nongaussian_subspace.ambient_dim();
  if (gaussian_directions.empty()) return Subspace::zero(n);
  Eigen::MatrixXd m(n, static_cast<Eigen::Index>(gaussian_directions.size()));
  for (std::size_t i = 0; i < gaussian_directions.size(); ++i)
    m.col(static_cast<Eigen::Index>(i)) = gaussian_directions[i].coords();
  return Subspace::from_orthonormal(std::move(m));
}

NgcaResult full_alg(const SampleSet& s, const FullConfig& cfg, Rng& rng) {
  cfg.validate();
  const Eigen::Index n = s.ambient_dim();

  NgcaResult result;
  result.config_used = cfg;
  result.smoothed = smooth_with_gaussian(s, cfg.noise_t_prime, rng);

  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(n, n);
  SampleSet level_samples = result.smoothed;

  for (int level = 0; level < n; ++level) {
    const Eigen::Index dim = n - level;
    LevelDiagnostics diag;
    diag.level = level;
    diag.ambient_dim = dim;
    diag.eps1 = cfg.descent.eps1;
    diag.eps2 = cfg.descent.eps2;
    diag.level_basis = basis;

    for (int attempt = 0; attempt < cfg.restarts_per_level; ++attempt) {
      DescentOutcome outcome = grad_des(level_samples, cfg.descent, rng);
      diag.restarts_used = attempt + 1;
      diag.restart_final_entropy.push_back(outcome.final_entropy);
      diag.restart_final_grad_norm.push_back(outcome.final_grad_norm);
      const bool ok = outcome.success();
      diag.outcome = std::move(outcome);
      if (ok) {
        diag.accepted = true;
        break;
      }
    }

    if (!diag.accepted) {
      result.levels.push_back(std::move(diag));
      break;
    }

    const Eigen::VectorXd u = diag.outcome.direction->coords();
    result.gaussian_directions.push_back(UnitVector::normalize(basis * u));

    const Subspace in_level = orthogonal_complement(Subspace::from_orthonormal(u));
    basis = basis * in_level.basis();
    level_samples = project_samples(level_samples, in_level);
    result.levels.push_back(std::move(diag));
  }

  if (basis.cols() == 0) {
    result.nongaussian_subspace = Subspace::zero(n);
  } else {
    // basis has orthonormal columns up to accumulated rounding.
    result.nongaussian_subspace = orthonormalize(basis);
  }
  return result;
}

}  // namespace ngca
