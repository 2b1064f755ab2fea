#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ngca/entropy.hpp"
#include "ngca/rng.hpp"
#include "ngca/sample_set.hpp"
#include "ngca/subspace.hpp"

namespace ngca {

struct DescentConfig {
  double eta = 0.25;          // initial step size
  double eps1 = 1e-2;         // gradient-norm accept threshold
  double eps2 = 3e-3;         // entropy accept threshold
  int max_iters = 400;
  double fd_step_h = 0.05;    // central-difference step
  int grad_repeats = 3;       // shifted-grid estimates averaged per evaluation
  HistogramConfig entropy_cfg;
  // Halve eta after two consecutive increases of the estimated entropy.
  bool halve_on_increase = true;

  void validate() const;
};

struct TraceEntry {
  int iter = 0;
  double grad_norm = 0.0;
  double entropy = 0.0;
  double eta = 0.0;
  Eigen::VectorXd direction;  // iterate at which grad_norm and entropy were measured
};

enum class DescentStatus { Success, Failure };

struct DescentOutcome {
  DescentStatus status = DescentStatus::Failure;
  std::optional<UnitVector> direction;  // set on success
  UnitVector last_iterate;
  double final_grad_norm = 0.0;
  double final_entropy = 0.0;
  int iterations_used = 0;
  std::vector<TraceEntry> trace;

  bool success() const noexcept { return status == DescentStatus::Success; }
};

// Estimated relative entropy of ⟨X, v⟩ for a (not necessarily unit) vector v,
// averaged over cfg.grad_repeats shifted histogram grids.
double entropy_along(const SampleSet& s, const Eigen::VectorXd& v, const DescentConfig& cfg);

/// Central-difference gradient of v ↦ S(⟨X, v⟩) at u: component i is
/// [Ŝ(u + h e_i) − Ŝ(u − h e_i)] / 2h, all evaluations on the same samples.
Eigen::VectorXd estimate_gradient(const SampleSet& s, const UnitVector& u, const DescentConfig& cfg);

// (u − η·delta)/‖u − η·delta‖; throws DegenerateStep when the norm is <= 1e-12.
UnitVector projected_step(const UnitVector& u, const Eigen::VectorXd& delta, double eta);

/// Projected gradient descent on the sphere from a uniformly random start.
/// Stops early once ‖∇‖ <= eps1 and Ŝ <= eps2; otherwise runs max_iters steps
/// and reports Failure. Never throws on non-convergence.
DescentOutcome grad_des(const SampleSet& s, const DescentConfig& cfg, Rng& rng);

// Same, from a given start.
DescentOutcome grad_des_from(const SampleSet& s, const DescentConfig& cfg, const UnitVector& start);

}  // namespace ngca
