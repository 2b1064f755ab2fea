#include "ngca/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ngca/error.hpp"
#include "ngca/moments.hpp"

namespace ngca {

namespace {

constexpr Eigen::Index kBlockRows = 4096;
constexpr double kMinUsableGap = 1e-3;

double max_gap_from_moments(std::span<const double> m, int r) {
  double gap = 0.0;
  for (int k = 3; k <= r; ++k)
    gap = std::max(gap, std::abs(m[static_cast<std::size_t>(k)] - gaussian_moment(k)));
  return gap;
}

Eigen::MatrixXd make_rotation_and_check(Rng& rng, Eigen::Index n) {
  Eigen::MatrixXd rot = haar_orthogonal(rng, n);
  const double err =
      (rot.transpose() * rot - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (err > 1e-9) fail(ErrorCode::InvalidArgument, "rotation lost orthogonality");
  return rot;
}

}  // namespace

Subspace NgcaInstance::nongaussian() const {
  return Subspace::from_orthonormal(rotation.rightCols(q));
}

double NgcaInstance::K() const {
  double k = 1.0;
  for (const auto& law : laws) k = std::max(k, law.subgaussian_K());
  return k;
}

double product_marginal_gap(std::span<const NonGaussianLaw> laws, const Eigen::VectorXd& a, int r) {
  if (static_cast<Eigen::Index>(laws.size()) != a.size())
    fail(ErrorCode::DimensionMismatch, "direction length must equal number of laws");
  const auto rr = static_cast<std::size_t>(r);
  std::vector<double> kappa(rr + 1, 0.0);
  for (std::size_t i = 0; i < laws.size(); ++i) {
    const auto m = laws[i].moments_up_to(r);
    const auto k_i = moments_to_cumulants(m);
    const double ai = a(static_cast<Eigen::Index>(i));
    for (std::size_t k = 1; k <= rr; ++k) kappa[k] += std::pow(ai, static_cast<double>(k)) * k_i[k];
  }
  const auto m = cumulants_to_moments(kappa);
  return max_gap_from_moments(m, r);
}

double product_moment_gap(std::span<const NonGaussianLaw> laws, int r, Rng& rng) {
  const auto q = static_cast<Eigen::Index>(laws.size());
  if (q == 0) fail(ErrorCode::EmptyInput, "no non-Gaussian laws");
  std::vector<std::pair<double, Eigen::VectorXd>> scored;
  auto consider = [&](const Eigen::VectorXd& v) {
    const Eigen::VectorXd a = v.normalized();
    scored.emplace_back(product_marginal_gap(laws, a, r), a);
  };

  if (q <= 6) {
    // Every nonzero direction with entries in {−1, 0, 1}, up to sign.
    const int total = static_cast<int>(std::pow(3, q));
    for (int code = 1; code < total; ++code) {
      Eigen::VectorXd v(q);
      int c = code;
      for (Eigen::Index i = 0; i < q; ++i, c /= 3) v(i) = static_cast<double>(c % 3) - 1.0;
      if (v.norm() > 0.0) consider(v);
    }
  }
  for (int i = 0; i < 2000; ++i) consider(rng.normal_vector(q));

  std::sort(scored.begin(), scored.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  double best = scored.front().first;
  const std::size_t seeds = std::min<std::size_t>(5, scored.size());
  for (std::size_t s = 0; s < seeds; ++s) {
    Eigen::VectorXd a = scored[s].second;
    double val = scored[s].first;
    double step = 0.2;
    for (int it = 0; it < 400 && step > 1e-7; ++it) {
      const Eigen::VectorXd trial = (a + step * rng.normal_vector(q)).normalized();
      const double tv = product_marginal_gap(laws, trial, r);
      if (tv < val) {
        val = tv;
        a = trial;
      } else if (it % 20 == 19) {
        step *= 0.5;
      }
    }
    best = std::min(best, val);
  }
  return best;
}

NgcaInstance synthesize_instance(Eigen::Index n, Eigen::Index p, std::vector<NonGaussianLaw> laws,
                                 int r, Rng& rng) {
  if (n < 1 || p < 0 || p > n) fail(ErrorCode::InvalidArgument, "need 0 <= p <= n, n >= 1");
  if (static_cast<Eigen::Index>(laws.size()) != n - p)
    fail(ErrorCode::DimensionMismatch, "number of laws must equal n − p");
  if (r < 3) fail(ErrorCode::InvalidArgument, "moment order bound r must be >= 3");

  NgcaInstance inst;
  inst.n = n;
  inst.p = p;
  inst.q = n - p;
  inst.r = r;
  inst.laws = std::move(laws);
  inst.rotation = make_rotation_and_check(rng, n);
  inst.gamma = Subspace::from_orthonormal(inst.rotation.leftCols(p));
  inst.gaussian_only = inst.q == 0;
  if (inst.gaussian_only) return inst;

  Rng search = rng.substream(0x6761705f736561ULL);
  const double D = product_moment_gap(inst.laws, r, search);
  if (D < kMinUsableGap)
    fail(ErrorCode::MomentGapTooSmall, "moment gap " + std::to_string(D) + " below 1e-3");
  inst.D = D;

  Rng check = rng.substream(0x636865636bULL);
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd a = random_unit_vector(check, inst.q).coords();
    if (product_marginal_gap(inst.laws, a, r) < D - 1e-3)
      fail(ErrorCode::MomentGapTooSmall, "moment gap search missed a smaller direction");
  }
  return inst;
}

NgcaInstance synthesize_instance_with_sampler(Eigen::Index n, Eigen::Index p, Eigen::Index q,
                                              JointSampler sampler, int r, Rng& rng,
                                              Eigen::Index mc_samples) {
  if (n < 1 || p < 0 || q < 1 || p + q != n)
    fail(ErrorCode::InvalidArgument, "need p + q = n with q >= 1");
  if (!sampler) fail(ErrorCode::InvalidArgument, "joint sampler is empty");
  if (r < 3) fail(ErrorCode::InvalidArgument, "moment order bound r must be >= 3");

  NgcaInstance inst;
  inst.n = n;
  inst.p = p;
  inst.q = q;
  inst.r = r;
  inst.rotation = make_rotation_and_check(rng, n);
  inst.gamma = Subspace::from_orthonormal(inst.rotation.leftCols(p));
  inst.joint_sampler = std::move(sampler);

  Rng mc = rng.substream(0x6d6f6e7465ULL);
  Eigen::MatrixXd draws(mc_samples, q);
  std::vector<double> row(static_cast<std::size_t>(q));
  for (Eigen::Index i = 0; i < mc_samples; ++i) {
    inst.joint_sampler(mc, row);
    for (Eigen::Index j = 0; j < q; ++j) draws(i, j) = row[static_cast<std::size_t>(j)];
  }
  double D = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 200; ++i) {
    const Eigen::VectorXd proj = draws * random_unit_vector(mc, q).coords();
    const auto mv = empirical_moments({proj.data(), static_cast<std::size_t>(proj.size())}, r);
    D = std::min(D, max_gap_from_moments(mv.values, r));
  }
  if (D < kMinUsableGap)
    fail(ErrorCode::MomentGapTooSmall, "estimated moment gap " + std::to_string(D) + " below 1e-3");
  inst.D = D;
  return inst;
}

SampleSet draw_samples(const NgcaInstance& inst, Eigen::Index N, Rng& rng) {
  if (N < 1) fail(ErrorCode::InvalidArgument, "need N >= 1");
  const Eigen::Index n = inst.n;
  const Eigen::Index p = inst.p;
  const std::uint64_t seed = rng.next_u64();
  const Rng base(seed);
  Eigen::MatrixXd data(N, n);
  std::vector<double> row(static_cast<std::size_t>(inst.q));
  for (Eigen::Index start = 0, block = 0; start < N; start += kBlockRows, ++block) {
    Rng stream = base.substream(static_cast<std::uint64_t>(block));
    const Eigen::Index rows = std::min(kBlockRows, N - start);
    Eigen::MatrixXd latent(rows, n);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < p; ++j) latent(i, j) = stream.normal();
      if (inst.joint_sampler) {
        inst.joint_sampler(stream, row);
        for (Eigen::Index j = 0; j < inst.q; ++j) latent(i, p + j) = row[static_cast<std::size_t>(j)];
      } else {
        for (Eigen::Index j = 0; j < inst.q; ++j)
          latent(i, p + j) = inst.laws[static_cast<std::size_t>(j)].sample(stream);
      }
    }
    data.middleRows(start, rows).noalias() = latent * inst.rotation.transpose();
  }
  return SampleSet(std::move(data), seed, {lineage::External{"synthetic"}});
}

}  // namespace ngca
