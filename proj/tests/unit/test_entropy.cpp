#include "doctest.h"
#include "helpers.hpp"

#include <algorithm>

#include "ngca/entropy.hpp"
#include "ngca/rng.hpp"

using namespace ngca;
using testing::error_code_of;
using testing::span_of;

namespace {

Eigen::VectorXd uniform_draws(Rng& rng, long N) {
  Eigen::VectorXd x(N);
  for (long i = 0; i < N; ++i) x(i) = std::sqrt(3.0) * (2 * rng.uniform() - 1);
  return x;
}

// Independent oracle: S(uniform on [−√3, √3]) = −log(2√3) + 1/2 + log√(2π).
const double kUniformS = -std::log(2 * std::sqrt(3.0)) + 0.5 + 0.5 * std::log(2 * M_PI);
const double kGaussianNegH = -0.5 * std::log(2 * M_PI * M_E);

}  // namespace

TEST_SUITE("entropy") {

TEST_CASE("config validation") {
  HistogramConfig c;
  CHECK_NOTHROW(c.validate());
  c.bucket_width_B = 0;
  CHECK(error_code_of([&] { c.validate(); }) == ErrorCode::InvalidArgument);
  c = {};
  c.truncation_A = 1e6;
  c.bucket_width_B = 1e-2;  // 1e8 buckets
  CHECK(error_code_of([&] { c.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("plogp: degenerate histogram") {
  const std::vector<double> same(500, 0.01);
  HistogramConfig c;
  CHECK(estimate_plogp(same, c) == doctest::Approx(-std::log(c.bucket_width_B)));
}

TEST_CASE("plogp: Gaussian and uniform") {
  Rng rng(1);
  HistogramConfig c;  // A = 8, B = 0.05
  const Eigen::VectorXd g = rng.normal_vector(100000);
  CHECK(std::abs(estimate_plogp(span_of(g), c) - kGaussianNegH) <= 0.02);
  const Eigen::VectorXd u = uniform_draws(rng, 100000);
  CHECK(std::abs(estimate_plogp(span_of(u), c) + std::log(2 * std::sqrt(3.0))) <= 0.02);
}

TEST_CASE("plogp: preconditions") {
  const std::vector<double> few(50, 0.0);
  CHECK(error_code_of([&] { estimate_plogp(few, HistogramConfig{}); }) == ErrorCode::InvalidArgument);
  const std::vector<double> far(200, 100.0);
  CHECK(error_code_of([&] { estimate_plogp(far, HistogramConfig{}); }) == ErrorCode::AllSamplesTruncated);
}

TEST_CASE("relative entropy: conversion identity and examples") {
  Rng rng(2);
  const HistogramConfig c = default_config(100000, 1.0, 0.3);
  const Eigen::VectorXd g = rng.normal_vector(100000);
  const auto e = relative_entropy(span_of(g), c);
  CHECK(e.value == doctest::Approx(e.raw_integral + e.sample_variance / 2 + 0.5 * std::log(2 * M_PI)).epsilon(1e-15));
  CHECK(std::abs(e.value) <= 0.02);
  CHECK(e.N == 100000);
  const Eigen::VectorXd u = uniform_draws(rng, 100000);
  CHECK(std::abs(relative_entropy(span_of(u), c).value - 0.1765) <= 0.03);
  const Eigen::VectorXd wide = 10 * g;
  CHECK(error_code_of([&] { relative_entropy(span_of(wide), c); }) == ErrorCode::VarianceOutOfRange);
}

TEST_CASE("relative entropy concentrates at 0 on Gaussian data (50 runs)") {
  Rng rng(3);
  const HistogramConfig c = default_config(100000, 1.0, 0.3);
  double sum = 0, worst = 0;
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd g = rng.normal_vector(100000);
    const double v = relative_entropy(span_of(g), c).value;
    CHECK(v >= -0.05);
    sum += std::abs(v);
    worst = std::max(worst, std::abs(v));
  }
  CHECK(sum / 50 <= 0.01);
  CHECK(worst <= 0.03);
}

TEST_CASE("analytic relative entropy") {
  CHECK(analytic_relative_entropy(ScaledGaussian{1.0}) == doctest::Approx(0.0));
  CHECK(analytic_relative_entropy(ScaledGaussian{2.0}) == doctest::Approx(-std::log(2.0) + 1.5));
  CHECK(analytic_relative_entropy(NonGaussianLaw::uniform()) == doctest::Approx(kUniformS).epsilon(1e-8));
  CHECK(kUniformS == doctest::Approx(0.17649).epsilon(1e-4));
  // Every law in the menu: quadrature vs an independent Simpson evaluation.
  for (const auto& law : {NonGaussianLaw::laplace_truncated(), NonGaussianLaw::two_point_smoothed(),
                          NonGaussianLaw::gaussian_mixture_symmetric(), NonGaussianLaw::shifted_exponential()}) {
    const auto bp = law.integration_breakpoints();
    double oracle = 0;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i)
      oracle += testing::simpson(
          [&](double x) {
            const double f = law.density(x);
            return f > 0 ? f * (std::log(f) + 0.5 * x * x + 0.5 * std::log(2 * M_PI)) : 0.0;
          },
          bp[i], bp[i + 1], 200000);
    CAPTURE(to_string(law.kind()));
    CHECK(analytic_relative_entropy(law) == doctest::Approx(oracle).epsilon(1e-6));
    CHECK(analytic_relative_entropy(law) > 0);
  }
}

TEST_CASE("scaling law: analytic and estimator level") {
  for (double lambda : {0.5, 2.0, 0.8, 1.25}) {
    const double diff = analytic_relative_entropy(ScaledGaussian{lambda}) - analytic_relative_entropy(ScaledGaussian{1.0});
    CHECK(diff == doctest::Approx(-std::log(lambda) + (lambda * lambda - 1) / 2).epsilon(1e-14));
  }
  Rng rng(4);
  const HistogramConfig c = default_config(100000, 2.0, 0.3);
  const Eigen::VectorXd g = rng.normal_vector(100000);
  const double base = relative_entropy(span_of(g), c).value;
  for (double lambda : {0.8, 1.25}) {
    const Eigen::VectorXd s = lambda * rng.normal_vector(100000);
    CHECK(std::abs(relative_entropy(span_of(s), c).value - base - (-std::log(lambda) + (lambda * lambda - 1) / 2)) <= 0.05);
  }
}

TEST_CASE("default config recipe") {
  const auto a = default_config(100000, 1.0, 0.3);
  CHECK(a.truncation_A == doctest::Approx(std::sqrt(2 * std::log(1e5)) + 2));
  CHECK(a.truncation_A == doctest::Approx(6.8).epsilon(0.01));
  CHECK(a.bucket_width_B == doctest::Approx(0.0215).epsilon(0.01));
  const auto b = default_config(1000, 1.0, 0.3);
  CHECK(b.bucket_width_B == doctest::Approx(0.1));
  CHECK(b.truncation_A == doctest::Approx(5.72).epsilon(0.01));
  CHECK(default_config(1000000, 3.0, 0.3).truncation_A == doctest::Approx(17.8).epsilon(0.01));
  CHECK(default_config(100000, 1.0, 0.3).min_count_floor == 1);
}

TEST_CASE("monotone truncation") {
  Rng rng(5);
  const Eigen::VectorXd g = 1.5 * rng.normal_vector(20000);
  HistogramConfig c;
  std::size_t prev = 0;
  for (double A = 0.5; A <= 8; A += 0.5) {
    c.truncation_A = A;
    const std::size_t n = counted_samples(span_of(g), c);
    CHECK(n >= prev);
    prev = n;
  }
}

TEST_CASE("consistency: doubling N does not increase median error") {
  Rng rng(6);
  auto median_err = [&](long N) {
    std::vector<double> errs;
    const HistogramConfig c = default_config(N, 1.0, 0.3);
    for (int i = 0; i < 20; ++i) {
      const Eigen::VectorXd u = uniform_draws(rng, N);
      errs.push_back(std::abs(relative_entropy(span_of(u), c).value - kUniformS));
    }
    std::nth_element(errs.begin(), errs.begin() + 10, errs.end());
    return errs[10];
  };
  CHECK(median_err(100000) <= median_err(50000));
}

TEST_CASE("Pinsker direction for the uniform law") {
  Rng rng(7);
  const Eigen::VectorXd u = uniform_draws(rng, 100000);
  const HistogramConfig c = default_config(100000, 1.0, 0.3);
  const double tv = histogram_tv_to_gaussian(span_of(u), c);
  CHECK(relative_entropy(span_of(u), c).value >= 2 * tv * tv - 0.05);
  CHECK(tv > 0.05);
}

TEST_CASE("shifted grids average") {
  Rng rng(8);
  const Eigen::VectorXd g = rng.normal_vector(20000);
  HistogramConfig c = default_config(20000, 1.0, 0.3);
  double mean = 0;
  for (int j = 0; j < 4; ++j) {
    HistogramConfig cj = c;
    cj.offset = c.bucket_width_B * j / 4;
    mean += relative_entropy(span_of(g), cj).value / 4;
  }
  CHECK(relative_entropy_averaged(span_of(g), c, 4) == doctest::Approx(mean).epsilon(1e-12));
}

}  // TEST_SUITE
