#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ngca/rng.hpp"

namespace ngca {

inline constexpr double kUnitTolerance = 1e-9;
inline constexpr double kOrthonormalTolerance = 1e-9;
inline constexpr double kRankTolerance = 1e-8;

/// A point on the unit sphere S^{n-1}. Construction normalizes; the stored
/// coordinates always have unit Euclidean norm.
class UnitVector {
 public:
  UnitVector() = default;

  // Normalizes v. Throws DegenerateStep if ‖v‖ <= 1e-12.
  static UnitVector normalize(const Eigen::VectorXd& v);
  // Wraps v without rescaling; throws InvalidArgument unless ‖v‖ = 1 within 1e-9.
  static UnitVector from_unit(const Eigen::VectorXd& v);
  static UnitVector basis(Eigen::Index n, Eigen::Index i);

  const Eigen::VectorXd& coords() const noexcept { return coords_; }
  Eigen::Index dim() const noexcept { return coords_.size(); }
  double operator[](Eigen::Index i) const { return coords_(i); }
  UnitVector operator-() const;

 private:
  explicit UnitVector(Eigen::VectorXd v) : coords_(std::move(v)) {}
  Eigen::VectorXd coords_;
};

/// A k-dimensional linear subspace of R^n held as an n×k matrix with
/// orthonormal columns. k = 0 is allowed (the zero subspace).
class Subspace {
 public:
  Subspace() = default;

  // Throws InvalidArgument unless basisᵀ·basis = I within 1e-9 entrywise.
  static Subspace from_orthonormal(Eigen::MatrixXd basis);
  static Subspace zero(Eigen::Index n);
  static Subspace full(Eigen::Index n);
  static Subspace coordinate(Eigen::Index n, Eigen::Index first, Eigen::Index count);

  const Eigen::MatrixXd& basis() const noexcept { return basis_; }
  Eigen::Index ambient_dim() const noexcept { return basis_.rows(); }
  Eigen::Index dim() const noexcept { return basis_.cols(); }
  Eigen::MatrixXd projector() const { return basis_ * basis_.transpose(); }

 private:
  explicit Subspace(Eigen::MatrixXd basis) : basis_(std::move(basis)) {}
  Eigen::MatrixXd basis_;
};

/// Orthonormal basis for the span of the columns of `vectors` (n×m).
///
/// Classical Gram–Schmidt with one reorthogonalization pass. A column whose
/// residual after both passes is below 1e-8 of its original norm is treated as
/// numerically dependent and dropped, so the returned dim() is the effective
/// rank and may be less than m. Throws EmptyInput when m = 0.
Subspace orthonormalize(const Eigen::MatrixXd& vectors);

// basis·basisᵀ·v.
Eigen::VectorXd project(const Subspace& s, const Eigen::VectorXd& v);

Subspace orthogonal_complement(const Subspace& s);

// ‖P_a − P_b‖_F. Throws DimensionMismatch on ambient mismatch and
// UnequalRank when dim(a) ≠ dim(b).
double subspace_distance(const Subspace& a, const Subspace& b);

struct PerturbationReport {
  Eigen::Index k = 0;
  double epsilon = 0.0;   // max_i (1 − ⟨λ_i, γ_i⟩)
  double distance = 0.0;  // d(span λ, span γ)
  double bound = 0.0;     // 6 k² ε^{1/4}
  bool holds = false;     // distance <= bound
  // ε < 1/(25k²) fails: the bound's hypothesis does not apply.
  bool hypothesis_violated = false;
  // ε <= 1/(50k²) fails: the tighter threshold used when deflating.
  bool strict_hypothesis_violated = false;
};

/// Compares the span of orthonormal `lambdas` (n×k) against the span of unit
/// vectors `gammas` (n×k) paired column by column. Throws RankDeficient when
/// the gammas span fewer than k dimensions numerically.
PerturbationReport check_perturbation_bound(const Eigen::MatrixXd& lambdas,
                                            const Eigen::MatrixXd& gammas);

// Uniform on S^{n-1}: a normalized isotropic Gaussian draw.
UnitVector random_unit_vector(Rng& rng, Eigen::Index n);

// Haar-distributed orthogonal matrix (QR of a Gaussian matrix, R diagonal made positive).
Eigen::MatrixXd haar_orthogonal(Rng& rng, Eigen::Index n);

}  // namespace ngca
