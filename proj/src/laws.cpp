#include "ngca/laws.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "ngca/error.hpp"
#include "ngca/moments.hpp"

namespace ngca {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

double normal_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

// E[(μ + sG)^k] for standard normal G.
double shifted_normal_moment(double mu, double sd, int k) {
  double acc = 0.0;
  for (int j = 0; j <= k; j += 2)
    acc += binomial(k, j) * std::pow(mu, k - j) * std::pow(sd, j) * gaussian_moment(j);
  return acc;
}

}  // namespace

std::string_view to_string(LawKind kind) {
  switch (kind) {
    case LawKind::Uniform: return "uniform";
    case LawKind::LaplaceTruncated: return "laplace_truncated";
    case LawKind::TwoPointSmoothed: return "two_point_smoothed";
    case LawKind::GaussianMixtureSymmetric: return "gaussian_mixture_symmetric";
    case LawKind::ShiftedExponential: return "shifted_exponential";
  }
  return "unknown";
}

LawKind law_kind_from_string(std::string_view name) {
  for (const LawKind k : {LawKind::Uniform, LawKind::LaplaceTruncated, LawKind::TwoPointSmoothed,
                          LawKind::GaussianMixtureSymmetric, LawKind::ShiftedExponential})
    if (to_string(k) == name) return k;
  fail(ErrorCode::InvalidArgument, "unknown law kind '" + std::string(name) + "'");
}

NonGaussianLaw NonGaussianLaw::uniform() { return NonGaussianLaw(LawKind::Uniform, {}); }

NonGaussianLaw NonGaussianLaw::laplace_truncated(double c) {
  return NonGaussianLaw(LawKind::LaplaceTruncated, {c});
}

NonGaussianLaw NonGaussianLaw::two_point_smoothed(double sigma) {
  return NonGaussianLaw(LawKind::TwoPointSmoothed, {sigma});
}

NonGaussianLaw NonGaussianLaw::gaussian_mixture_symmetric(double mu) {
  return NonGaussianLaw(LawKind::GaussianMixtureSymmetric, {mu});
}

NonGaussianLaw NonGaussianLaw::shifted_exponential() {
  return NonGaussianLaw(LawKind::ShiftedExponential, {});
}

NonGaussianLaw NonGaussianLaw::make(LawKind kind, const std::vector<double>& params) {
  switch (kind) {
    case LawKind::Uniform:
    case LawKind::ShiftedExponential:
      if (!params.empty()) fail(ErrorCode::InvalidArgument, "law takes no parameters");
      return NonGaussianLaw(kind, {});
    default:
      if (params.size() > 1) fail(ErrorCode::InvalidArgument, "law takes one parameter");
      if (params.empty()) {
        if (kind == LawKind::LaplaceTruncated) return laplace_truncated();
        if (kind == LawKind::TwoPointSmoothed) return two_point_smoothed();
        return gaussian_mixture_symmetric();
      }
      return NonGaussianLaw(kind, params);
  }
}

NonGaussianLaw::NonGaussianLaw(LawKind kind, std::vector<double> params)
    : kind_(kind), params_(std::move(params)) {
  switch (kind_) {
    case LawKind::Uniform:
    case LawKind::ShiftedExponential:
      break;
    case LawKind::LaplaceTruncated: {
      const double c = params_.at(0);
      if (!(c > 0.0)) fail(ErrorCode::InvalidArgument, "truncation must be positive");
      using boost::math::gamma_p;
      // Var = b²·Γ(3)P(3,c)/P(1,c); pick b for unit variance.
      scale_ = 1.0 / std::sqrt(2.0 * gamma_p(3.0, c) / gamma_p(1.0, c));
      aux_ = c;
      break;
    }
    case LawKind::TwoPointSmoothed: {
      const double sigma = params_.at(0);
      if (!(sigma > 0.0)) fail(ErrorCode::InvalidArgument, "sigma must be positive");
      const double norm = std::sqrt(1.0 + sigma * sigma);
      scale_ = 1.0 / norm;  // component mean
      aux_ = sigma / norm;  // component sd
      break;
    }
    case LawKind::GaussianMixtureSymmetric: {
      const double mu = params_.at(0);
      if (!(mu > 0.0 && mu < 1.0)) fail(ErrorCode::InvalidArgument, "mu must be in (0, 1)");
      scale_ = mu;
      aux_ = std::sqrt(1.0 - mu * mu);
      break;
    }
  }
  for (int k = 0; k <= kLawMomentOrder; ++k) moments_[static_cast<std::size_t>(k)] = raw_moment(k);

  double K = 1.0;
  for (int i = 1; i <= 1200; ++i) {
    const double t = 0.01 * i;
    const double tail = two_sided_tail(t);
    if (tail <= 0.0) break;
    if (tail >= 2.0) continue;
    K = std::max(K, t / std::sqrt(std::log(2.0 / tail)));
  }
  K_ = K;
}

double NonGaussianLaw::raw_moment(int k) const {
  if (k == 0) return 1.0;
  switch (kind_) {
    case LawKind::Uniform:
      return k % 2 ? 0.0 : std::pow(3.0, 0.5 * k) / (k + 1.0);
    case LawKind::LaplaceTruncated: {
      if (k % 2) return 0.0;
      using boost::math::gamma_p;
      return std::pow(scale_, k) * std::tgamma(k + 1.0) * gamma_p(k + 1.0, aux_) / gamma_p(1.0, aux_);
    }
    case LawKind::TwoPointSmoothed:
    case LawKind::GaussianMixtureSymmetric:
      return k % 2 ? 0.0 : shifted_normal_moment(scale_, aux_, k);
    case LawKind::ShiftedExponential: {
      // E[(E−1)^k] is the derangement number !k.
      double d_prev = 1.0, d = 0.0;
      for (int j = 2; j <= k; ++j) {
        const double next = (j - 1) * (d + d_prev);
        d_prev = d;
        d = next;
      }
      return d;
    }
  }
  return 0.0;
}

std::vector<double> NonGaussianLaw::moments_up_to(int r) const {
  std::vector<double> m(static_cast<std::size_t>(r) + 1);
  for (int k = 0; k <= r; ++k)
    m[static_cast<std::size_t>(k)] =
        k <= kLawMomentOrder ? moments_[static_cast<std::size_t>(k)] : raw_moment(k);
  return m;
}

double NonGaussianLaw::sample(Rng& rng) const {
  switch (kind_) {
    case LawKind::Uniform:
      return kSqrt3 * (2.0 * rng.uniform() - 1.0);
    case LawKind::LaplaceTruncated: {
      const double u = rng.uniform();
      const double mag = -scale_ * std::log1p(-u * (-std::expm1(-aux_)));
      return rng.uniform() < 0.5 ? -mag : mag;
    }
    case LawKind::TwoPointSmoothed:
    case LawKind::GaussianMixtureSymmetric: {
      const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
      return sign * scale_ + aux_ * rng.normal();
    }
    case LawKind::ShiftedExponential:
      return -std::log1p(-rng.uniform()) - 1.0;
  }
  return 0.0;
}

double NonGaussianLaw::density(double x) const {
  switch (kind_) {
    case LawKind::Uniform:
      return std::abs(x) <= kSqrt3 ? 1.0 / (2.0 * kSqrt3) : 0.0;
    case LawKind::LaplaceTruncated: {
      const double limit = aux_ * scale_;
      if (std::abs(x) > limit) return 0.0;
      return std::exp(-std::abs(x) / scale_) / (2.0 * scale_ * (-std::expm1(-aux_)));
    }
    case LawKind::TwoPointSmoothed:
    case LawKind::GaussianMixtureSymmetric:
      return 0.5 * (normal_pdf(x, scale_, aux_) + normal_pdf(x, -scale_, aux_));
    case LawKind::ShiftedExponential:
      return x >= -1.0 ? std::exp(-(x + 1.0)) : 0.0;
  }
  return 0.0;
}

double NonGaussianLaw::two_sided_tail(double t) const {
  if (t <= 0.0) return 1.0;
  switch (kind_) {
    case LawKind::Uniform:
      return t >= kSqrt3 ? 0.0 : 1.0 - t / kSqrt3;
    case LawKind::LaplaceTruncated: {
      const double c = t / scale_;
      if (c >= aux_) return 0.0;
      return (std::exp(-c) - std::exp(-aux_)) / (-std::expm1(-aux_));
    }
    case LawKind::TwoPointSmoothed:
    case LawKind::GaussianMixtureSymmetric:
      return normal_upper_tail((t - scale_) / aux_) + normal_upper_tail((t + scale_) / aux_);
    case LawKind::ShiftedExponential:
      return std::exp(-(t + 1.0)) + (t < 1.0 ? 1.0 - std::exp(-(1.0 - t)) : 0.0);
  }
  return 0.0;
}

std::vector<double> NonGaussianLaw::integration_breakpoints() const {
  switch (kind_) {
    case LawKind::Uniform:
      return {-kSqrt3, 0.0, kSqrt3};
    case LawKind::LaplaceTruncated:
      return {-aux_ * scale_, 0.0, aux_ * scale_};
    case LawKind::TwoPointSmoothed:
    case LawKind::GaussianMixtureSymmetric: {
      const double reach = scale_ + 40.0 * aux_;
      return {-reach, -scale_, 0.0, scale_, reach};
    }
    case LawKind::ShiftedExponential:
      return {-1.0, 0.0, 2.0, 10.0, 45.0};
  }
  return {};
}

}  // namespace ngca
