#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ngca/sample_set.hpp"
#include "ngca/subspace.hpp"

namespace ngca {

/// Dense symmetric tensor of order 3 or 4 over R^n, stored flat with the
/// last index fastest: entry (i, j, k) lives at (i·n + j)·n + k.
class CumulantTensor {
 public:
  CumulantTensor(int order, Eigen::Index n);

  int order() const noexcept { return order_; }
  Eigen::Index dim() const noexcept { return n_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }

  double operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k) const;
  double operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k, Eigen::Index l) const;

  // Rows are the slices T[i₁..i_{d−1}, ·]; shape n^{d−1} × n.
  Eigen::MatrixXd unfold() const;

 private:
  int order_;
  Eigen::Index n_;
  std::vector<double> values_;
};

inline constexpr Eigen::Index kMaxCumulantDim = 32;

// (1/N) Σ x_i x_j x_k on internally centered data. Requires N >= 1000.
CumulantTensor joint_cumulant_order3(const SampleSet& s);

// (1/N) Σ x_i x_j x_k x_l − (δ_ij δ_kl + δ_ik δ_jl + δ_il δ_jk). Throws
// NotIsotropic when the empirical covariance is more than 1e-2 from I.
CumulantTensor joint_cumulant_order4(const SampleSet& s);

struct CumulantGram {
  std::vector<int> order_set;
  Eigen::MatrixXd gram;      // Σ over orders of unfoldᵀ·unfold
  Eigen::VectorXd eigvals;   // ascending
  Eigen::MatrixXd eigvecs;   // columns match eigvals
  double noise_floor = 0.0;  // expected eigenvalue scale of pure-Gaussian data at this N
  double threshold = 0.0;    // eigenvalues <= threshold form the kernel
  Eigen::Index kernel_dim = 0;
  // Separation between the largest kernel eigenvalue and the smallest
  // non-kernel one (infinite when either side is empty).
  double spectral_gap_ratio = 0.0;
  bool reliable = true;      // false when spectral_gap_ratio < 10
};

struct CumulantKernelResult {
  Subspace gaussian;
  CumulantGram report;
};

/// Gaussian subspace as the (near-)kernel of the Gram matrix of the flattened
/// cumulant tensors of the requested orders (subset of {3, 4}). The kernel
/// threshold is max(kernel_tol·λ_max, 10·noise_floor).
CumulantKernelResult cumulant_kernel(const SampleSet& s, const std::vector<int>& orders,
                                     double kernel_tol = 0.05);

// Gram matrix alone (no eigen-decomposition), for equivariance checks.
Eigen::MatrixXd cumulant_gram(const SampleSet& s, const std::vector<int>& orders);

// Mean eigenvalue of E[gram] when the data are N i.i.d. standard Gaussians.
double gaussian_gram_noise_floor(Eigen::Index n, Eigen::Index N, const std::vector<int>& orders);

}  // namespace ngca
