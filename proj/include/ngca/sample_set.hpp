#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ngca/rng.hpp"
#include "ngca/subspace.hpp"

namespace ngca {

namespace lineage {
struct External {
  std::string source;
};
struct Whiten {
  Eigen::VectorXd mean;
  Eigen::MatrixXd transform;  // rows ↦ (row − mean)·transform
};
struct Smooth {
  double t = 0.0;
};
struct Project {
  Subspace onto;
};
}  // namespace lineage

using LineageStep =
    std::variant<lineage::External, lineage::Whiten, lineage::Smooth, lineage::Project>;

std::string describe(const LineageStep& step);

/// N samples in R^n stored as an N×n matrix (one sample per row). The lineage
/// is append-only: every transform returns a new SampleSet with one more step.
class SampleSet {
 public:
  SampleSet() = default;
  SampleSet(Eigen::MatrixXd data, std::uint64_t seed, std::vector<LineageStep> lineage = {});

  const Eigen::MatrixXd& data() const noexcept { return data_; }
  Eigen::Index N() const noexcept { return data_.rows(); }
  Eigen::Index ambient_dim() const noexcept { return data_.cols(); }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<LineageStep>& lineage() const noexcept { return lineage_; }

  SampleSet with(Eigen::MatrixXd data, LineageStep step) const;

 private:
  Eigen::MatrixXd data_;
  std::uint64_t seed_ = 0;
  std::vector<LineageStep> lineage_;
};

struct IsotropizeResult {
  SampleSet samples;
  Eigen::VectorXd mean;
  Eigen::MatrixXd transform;  // symmetric Σ̂^{-1/2}
};

// Centers and whitens with the symmetric inverse square root of the empirical
// covariance. Throws SingularCovariance when N < n or λ_min(Σ̂) <= 1e-10.
IsotropizeResult isotropize(const SampleSet& s);

// Rows become √(1−t²)·row + t·g with fresh standard Gaussian g; 0 <= t < 1.
SampleSet smooth_with_gaussian(const SampleSet& s, double t, Rng& rng);

// Coordinates of each row in the orthonormal basis of v (ambient dim becomes dim v).
SampleSet project_samples(const SampleSet& s, const Subspace& v);

// ⟨row, u⟩ per row.
Eigen::VectorXd marginal(const SampleSet& s, const UnitVector& u);

}  // namespace ngca
