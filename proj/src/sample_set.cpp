#include "ngca/sample_set.hpp"

#include <cmath>
#include <sstream>

#include "ngca/error.hpp"

namespace ngca {

namespace {
constexpr Eigen::Index kBlockRows = 4096;
}

std::string describe(const LineageStep& step) {
  struct Visitor {
    std::string operator()(const lineage::External& e) const { return "external(" + e.source + ")"; }
    std::string operator()(const lineage::Whiten&) const { return "whiten"; }
    std::string operator()(const lineage::Smooth& s) const {
      std::ostringstream os;
      os.precision(17);
      os << "smooth(" << s.t << ")";
      return os.str();
    }
    std::string operator()(const lineage::Project& p) const {
      return "project(" + std::to_string(p.onto.ambient_dim()) + "->" +
             std::to_string(p.onto.dim()) + ")";
    }
  };
  return std::visit(Visitor{}, step);
}

SampleSet::SampleSet(Eigen::MatrixXd data, std::uint64_t seed, std::vector<LineageStep> lineage)
    : data_(std::move(data)), seed_(seed), lineage_(std::move(lineage)) {}

SampleSet SampleSet::with(Eigen::MatrixXd data, LineageStep step) const {
  auto steps = lineage_;
  steps.push_back(std::move(step));
  return SampleSet(std::move(data), seed_, std::move(steps));
}

IsotropizeResult isotropize(const SampleSet& s) {
  const Eigen::Index N = s.N();
  const Eigen::Index n = s.ambient_dim();
  if (N < n || N < 2)
    fail(ErrorCode::SingularCovariance,
         "need at least as many samples as dimensions (N=" + std::to_string(N) +
             ", n=" + std::to_string(n) + ")");

  const Eigen::VectorXd mean = s.data().colwise().mean().transpose();
  Eigen::MatrixXd centered = s.data().rowwise() - mean.transpose();
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(N);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const double min_eig = eig.eigenvalues().minCoeff();
  if (!(min_eig > 1e-10))
    fail(ErrorCode::SingularCovariance,
         "empirical covariance has min eigenvalue " + std::to_string(min_eig));

  const Eigen::VectorXd inv_sqrt = eig.eigenvalues().cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd transform =
      eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose();
  Eigen::MatrixXd white = centered * transform;
  // Remove the O(ε_machine) residual mean so the output is centered exactly.
  white.rowwise() -= white.colwise().mean();

  IsotropizeResult out{s.with(std::move(white), lineage::Whiten{mean, transform}), mean, transform};
  return out;
}

SampleSet smooth_with_gaussian(const SampleSet& s, double t, Rng& rng) {
  if (!(t >= 0.0 && t < 1.0)) fail(ErrorCode::InvalidArgument, "smoothing t must be in [0, 1)");
  Eigen::MatrixXd out = s.data();
  if (t > 0.0) {
    const double keep = std::sqrt(1.0 - t * t);
    const Eigen::Index N = out.rows();
    const Eigen::Index n = out.cols();
    const Rng base(rng.next_u64());
    for (Eigen::Index start = 0, block = 0; start < N; start += kBlockRows, ++block) {
      Rng stream = base.substream(static_cast<std::uint64_t>(block));
      const Eigen::Index rows = std::min(kBlockRows, N - start);
      for (Eigen::Index i = start; i < start + rows; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out(i, j) = keep * out(i, j) + t * stream.normal();
    }
  }
  return s.with(std::move(out), lineage::Smooth{t});
}

SampleSet project_samples(const SampleSet& s, const Subspace& v) {
  if (v.ambient_dim() != s.ambient_dim())
    fail(ErrorCode::DimensionMismatch, "subspace ambient dimension does not match samples");
  return s.with(s.data() * v.basis(), lineage::Project{v});
}

Eigen::VectorXd marginal(const SampleSet& s, const UnitVector& u) {
  if (u.dim() != s.ambient_dim())
    fail(ErrorCode::DimensionMismatch, "direction dimension does not match samples");
  return s.data() * u.coords();
}

}  // namespace ngca
