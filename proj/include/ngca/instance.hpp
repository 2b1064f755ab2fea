#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ngca/laws.hpp"
#include "ngca/rng.hpp"
#include "ngca/sample_set.hpp"
#include "ngca/subspace.hpp"

namespace ngca {

// Fills `out` (length q) with one draw of the non-Gaussian component.
using JointSampler = std::function<void(Rng&, std::span<double>)>;

/// A planted isotropic NGCA model: X = rotation · (Z, X̃) with Z ~ N(0, I_p)
/// and X̃ drawn from a product of `laws` (or from a user joint sampler).
struct NgcaInstance {
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  Eigen::Index q = 0;
  Eigen::MatrixXd rotation;
  std::vector<NonGaussianLaw> laws;
  Subspace gamma;  // Gaussian subspace: rotation · span{e_1..e_p}
  // Minimum over unit a ∈ Γ^⊥ of max_{3<=k<=r} |M_k(⟨X̃,a⟩) − M_k(Z)|.
  // Absent for a purely Gaussian instance.
  std::optional<double> D;
  int r = 4;
  bool gaussian_only = false;
  JointSampler joint_sampler;  // empty for product laws

  Subspace nongaussian() const;
  // max subgaussian K over the planted laws (1 when Gaussian only).
  double K() const;
};

// Exact max_{3<=k<=r} |M_k − M_k(Z)| of ⟨X̃, a⟩ for a product law, computed by
// adding cumulants coordinatewise.
double product_marginal_gap(std::span<const NonGaussianLaw> laws, const Eigen::VectorXd& a, int r);

// Minimizes product_marginal_gap over the unit sphere of R^q (candidate
// directions plus local refinement).
double product_moment_gap(std::span<const NonGaussianLaw> laws, int r, Rng& rng);

// Throws MomentGapTooSmall when the computed D is below 1e-3.
NgcaInstance synthesize_instance(Eigen::Index n, Eigen::Index p, std::vector<NonGaussianLaw> laws,
                                 int r, Rng& rng);

// Dependent non-Gaussian component; D is estimated by Monte Carlo over 200
// random directions with `mc_samples` draws.
NgcaInstance synthesize_instance_with_sampler(Eigen::Index n, Eigen::Index p, Eigen::Index q,
                                              JointSampler sampler, int r, Rng& rng,
                                              Eigen::Index mc_samples = 200000);

SampleSet draw_samples(const NgcaInstance& inst, Eigen::Index N, Rng& rng);

}  // namespace ngca
