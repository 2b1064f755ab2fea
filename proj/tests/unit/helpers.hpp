#pragma once

#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ngca/error.hpp"

// Shared helpers for the unit tests. Oracles here are deliberately written
// without calling into the library code they check.
namespace testing {

inline std::span<const double> span_of(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// Composite Simpson rule on [a, b] with m (even) panels.
template <typename F>
double simpson(F f, double a, double b, int m = 20000) {
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int i = 1; i < m; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double sample_mean_pow(const Eigen::VectorXd& x, int k) {
  return x.array().pow(k).mean();
}

// Standard error of (1/N)Σx^k estimated from the sample itself.
inline double sample_se_pow(const Eigen::VectorXd& x, int k) {
  const Eigen::ArrayXd p = x.array().pow(k);
  const double m = p.mean();
  return std::sqrt((p - m).square().sum() / (p.size() - 1) / p.size());
}

template <typename F>
ngca::ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const ngca::Error& e) {
    return e.code();
  }
  return static_cast<ngca::ErrorCode>(-1);
}

}  // namespace testing
