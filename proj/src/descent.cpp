#include "ngca/descent.hpp"

#include <cmath>

#include "ngca/error.hpp"

namespace ngca {

namespace {

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

void DescentConfig::validate() const {
  if (!(eta > 0.0) || !(eps1 > 0.0) || !(eps2 > 0.0))
    fail(ErrorCode::InvalidArgument, "eta, eps1 and eps2 must be positive");
  if (!(fd_step_h > 1e-6 && fd_step_h < 0.5))
    fail(ErrorCode::InvalidArgument, "fd_step_h must lie in (1e-6, 0.5)");
  if (max_iters < 0 || grad_repeats < 1)
    fail(ErrorCode::InvalidArgument, "max_iters >= 0 and grad_repeats >= 1 required");
  entropy_cfg.validate();
}

double entropy_along(const SampleSet& s, const Eigen::VectorXd& v, const DescentConfig& cfg) {
  const Eigen::VectorXd m = s.data() * v;
  return relative_entropy_averaged(as_span(m), cfg.entropy_cfg, cfg.grad_repeats);
}

Eigen::VectorXd estimate_gradient(const SampleSet& s, const UnitVector& u, const DescentConfig& cfg) {
  if (u.dim() != s.ambient_dim())
    fail(ErrorCode::DimensionMismatch, "direction dimension does not match samples");
  const Eigen::Index n = s.ambient_dim();
  const double h = cfg.fd_step_h;
  const Eigen::VectorXd base = s.data() * u.coords();
  Eigen::VectorXd shifted(base.size());
  Eigen::VectorXd grad(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    shifted = base + h * s.data().col(i);
    const double plus = relative_entropy_averaged(as_span(shifted), cfg.entropy_cfg, cfg.grad_repeats);
    shifted = base - h * s.data().col(i);
    const double minus = relative_entropy_averaged(as_span(shifted), cfg.entropy_cfg, cfg.grad_repeats);
    grad(i) = (plus - minus) / (2.0 * h);
  }
  return grad;
}

UnitVector projected_step(const UnitVector& u, const Eigen::VectorXd& delta, double eta) {
  if (delta.size() != u.dim()) fail(ErrorCode::DimensionMismatch, "step and point dimensions differ");
  const Eigen::VectorXd v = u.coords() - eta * delta;
  if (!(v.norm() > 1e-12)) fail(ErrorCode::DegenerateStep, "step lands on the origin");
  return UnitVector::normalize(v);
}

DescentOutcome grad_des(const SampleSet& s, const DescentConfig& cfg, Rng& rng) {
  if (s.ambient_dim() < 1) fail(ErrorCode::InvalidArgument, "ambient dimension must be >= 1");
  return grad_des_from(s, cfg, random_unit_vector(rng, s.ambient_dim()));
}

DescentOutcome grad_des_from(const SampleSet& s, const DescentConfig& cfg, const UnitVector& start) {
  cfg.validate();
  DescentOutcome out;
  UnitVector u = start;
  double eta = cfg.eta;
  double prev_entropy = 0.0;
  int increases = 0;
  for (int iter = 0;; ++iter) {
    const Eigen::VectorXd g = estimate_gradient(s, u, cfg);
    const double entropy = entropy_along(s, u.coords(), cfg);
    const double gnorm = g.norm();
    out.trace.push_back({iter, gnorm, entropy, eta, u.coords()});
    out.final_grad_norm = gnorm;
    out.final_entropy = entropy;
    out.iterations_used = iter;
    out.last_iterate = u;
    if (gnorm <= cfg.eps1 && entropy <= cfg.eps2) {
      out.status = DescentStatus::Success;
      out.direction = u;
      return out;
    }
    if (iter >= cfg.max_iters) break;

    if (iter > 0 && entropy > prev_entropy) {
      if (++increases >= 2 && cfg.halve_on_increase) {
        eta *= 0.5;
        increases = 0;
      }
    } else {
      increases = 0;
    }
    prev_entropy = entropy;
    u = projected_step(u, g, eta);
  }
  out.status = DescentStatus::Failure;
  return out;
}

}  // namespace ngca
