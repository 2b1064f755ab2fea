#include "ngca/subspace.hpp"

#include <cmath>
#include <string>

#include "ngca/error.hpp"

namespace ngca {

UnitVector UnitVector::normalize(const Eigen::VectorXd& v) {
  const double norm = v.norm();
  if (!(norm > 1e-12) || !std::isfinite(norm))
    fail(ErrorCode::DegenerateStep, "cannot normalize a vector of norm " + std::to_string(norm));
  return UnitVector(v / norm);
}

UnitVector UnitVector::from_unit(const Eigen::VectorXd& v) {
  if (std::abs(v.norm() - 1.0) > kUnitTolerance)
    fail(ErrorCode::InvalidArgument, "vector is not unit length");
  return UnitVector(v);
}

UnitVector UnitVector::basis(Eigen::Index n, Eigen::Index i) {
  if (i < 0 || i >= n) fail(ErrorCode::DimensionMismatch, "basis index out of range");
  return UnitVector(Eigen::VectorXd::Unit(n, i));
}

UnitVector UnitVector::operator-() const { return UnitVector(-coords_); }

Subspace Subspace::from_orthonormal(Eigen::MatrixXd basis) {
  const Eigen::Index k = basis.cols();
  if (k > 0) {
    const Eigen::MatrixXd gram = basis.transpose() * basis;
    const double err = (gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
    if (err > kOrthonormalTolerance)
      fail(ErrorCode::InvalidArgument,
           "basis columns are not orthonormal (max deviation " + std::to_string(err) + ")");
  }
  if (k > basis.rows()) fail(ErrorCode::DimensionMismatch, "more basis vectors than dimensions");
  return Subspace(std::move(basis));
}

Subspace Subspace::zero(Eigen::Index n) { return Subspace(Eigen::MatrixXd(n, 0)); }

Subspace Subspace::full(Eigen::Index n) { return Subspace(Eigen::MatrixXd::Identity(n, n)); }

Subspace Subspace::coordinate(Eigen::Index n, Eigen::Index first, Eigen::Index count) {
  if (first < 0 || count < 0 || first + count > n)
    fail(ErrorCode::DimensionMismatch, "coordinate range outside ambient space");
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, count);
  for (Eigen::Index j = 0; j < count; ++j) b(first + j, j) = 1.0;
  return Subspace(std::move(b));
}

Subspace orthonormalize(const Eigen::MatrixXd& vectors) {
  const Eigen::Index n = vectors.rows();
  const Eigen::Index m = vectors.cols();
  if (m == 0) fail(ErrorCode::EmptyInput, "orthonormalize needs at least one vector");

  Eigen::MatrixXd q(n, std::min(n, m));
  Eigen::Index rank = 0;
  for (Eigen::Index j = 0; j < m && rank < n; ++j) {
    Eigen::VectorXd v = vectors.col(j);
    const double original = v.norm();
    if (!(original > 0.0)) continue;
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd coeffs = q.leftCols(rank).transpose() * v;
      v.noalias() -= q.leftCols(rank) * coeffs;
    }
    const double residual = v.norm();
    if (residual <= kRankTolerance * original) continue;
    q.col(rank++) = v / residual;
  }
  return Subspace::from_orthonormal(q.leftCols(rank));
}

Eigen::VectorXd project(const Subspace& s, const Eigen::VectorXd& v) {
  if (v.size() != s.ambient_dim())
    fail(ErrorCode::DimensionMismatch, "vector length does not match ambient dimension");
  return s.basis() * (s.basis().transpose() * v);
}

Subspace orthogonal_complement(const Subspace& s) {
  const Eigen::Index n = s.ambient_dim();
  const Eigen::Index k = s.dim();
  if (k == 0) return Subspace::full(n);
  if (k == n) return Subspace::zero(n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(s.basis());
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  // Householder output is orthonormal to machine precision; one GS sweep
  // against the input basis removes what rounding leaves behind.
  Eigen::MatrixXd comp = q.rightCols(n - k);
  comp -= s.basis() * (s.basis().transpose() * comp);
  return orthonormalize(comp);
}

double subspace_distance(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim())
    fail(ErrorCode::DimensionMismatch, "subspaces live in different ambient dimensions");
  if (a.dim() != b.dim())
    fail(ErrorCode::UnequalRank, "subspace distance is defined for equal dimensions only");
  // ‖P_a − P_b‖_F² = 2k − 2‖aᵀb‖_F²; the direct form keeps full accuracy near 0.
  return (a.projector() - b.projector()).norm();
}

PerturbationReport check_perturbation_bound(const Eigen::MatrixXd& lambdas,
                                            const Eigen::MatrixXd& gammas) {
  if (lambdas.rows() != gammas.rows() || lambdas.cols() != gammas.cols())
    fail(ErrorCode::DimensionMismatch, "lambda and gamma families must have equal shape");
  const Eigen::Index k = lambdas.cols();
  if (k == 0) fail(ErrorCode::EmptyInput, "perturbation check needs k >= 1");

  const Subspace lambda_span = Subspace::from_orthonormal(lambdas);
  const Subspace gamma_span = orthonormalize(gammas);
  if (gamma_span.dim() < k)
    fail(ErrorCode::RankDeficient, "gammas span only " + std::to_string(gamma_span.dim()) +
                                       " of " + std::to_string(k) + " dimensions");

  PerturbationReport report;
  report.k = k;
  double eps = 0.0;
  for (Eigen::Index i = 0; i < k; ++i)
    eps = std::max(eps, 1.0 - lambdas.col(i).dot(gammas.col(i)));
  report.epsilon = eps;
  report.distance = subspace_distance(lambda_span, gamma_span);
  const double k2 = static_cast<double>(k * k);
  report.bound = 6.0 * k2 * std::pow(std::max(eps, 0.0), 0.25);
  report.holds = report.distance <= report.bound;
  report.hypothesis_violated = !(eps < 1.0 / (25.0 * k2));
  report.strict_hypothesis_violated = !(eps <= 1.0 / (50.0 * k2));
  return report;
}

UnitVector random_unit_vector(Rng& rng, Eigen::Index n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "sphere dimension must be >= 1");
  for (;;) {
    Eigen::VectorXd g = rng.normal_vector(n);
    if (g.norm() > 1e-12) return UnitVector::normalize(g);
  }
}

Eigen::MatrixXd haar_orthogonal(Rng& rng, Eigen::Index n) {
  const Eigen::MatrixXd g = rng.normal_matrix(n, n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

}  // namespace ngca
