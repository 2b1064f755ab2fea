#include "ngca/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ngca/error.hpp"

namespace ngca {

QuadratureResult integrate(const std::function<double(double)>& f,
                           std::span<const double> breakpoints, double abs_tol) {
  if (breakpoints.size() < 2)
    fail(ErrorCode::InvalidArgument, "quadrature needs at least two breakpoints");
  using boost::math::quadrature::gauss_kronrod;
  // Boost's tolerance is relative to the L1 norm; asking for less than a few
  // ulps only buys exponential subdivision, so clamp it and bound the depth.
  constexpr unsigned kMaxDepth = 15;
  constexpr double kMinRelTol = 1e-14;
  QuadratureResult out;
  const double per_piece = abs_tol / static_cast<double>(breakpoints.size() - 1);
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    double err = 0.0;
    const double v = gauss_kronrod<double, 15>::integrate(f, breakpoints[i], breakpoints[i + 1],
                                                          kMaxDepth, std::max(per_piece, kMinRelTol), &err);
    out.value += v;
    out.error_estimate += err;
  }
  if (!std::isfinite(out.value) || out.error_estimate > abs_tol)
    fail(ErrorCode::QuadratureNonconvergent,
         "error estimate " + std::to_string(out.error_estimate) + " exceeds tolerance");
  return out;
}

}  // namespace ngca
