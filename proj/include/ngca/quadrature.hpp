#pragma once

#include <functional>
#include <span>

namespace ngca {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Adaptive 15-point Gauss–Kronrod integration of f over consecutive intervals
/// [breakpoints[i], breakpoints[i+1]]. Throws QuadratureNonconvergent when the
/// summed error estimate exceeds abs_tol.
QuadratureResult integrate(const std::function<double(double)>& f,
                           std::span<const double> breakpoints, double abs_tol = 1e-10);

}  // namespace ngca
