#include "ngca/cumulant.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "ngca/error.hpp"
#include "ngca/moments.hpp"

namespace ngca {

namespace {

constexpr Eigen::Index kChunk = 2048;

void check_dim(Eigen::Index n) {
  if (n < 1 || n > kMaxCumulantDim)
    fail(ErrorCode::InvalidArgument, "cumulant tensors support 1 <= n <= 32");
}

Eigen::MatrixXd centered(const SampleSet& s) {
  if (s.N() < 1000) fail(ErrorCode::InvalidArgument, "cumulant estimation needs N >= 1000");
  Eigen::MatrixXd x = s.data();
  x.rowwise() -= x.colwise().mean();
  return x;
}

// Row r of the result holds x_i·x_j at column i·n + j.
void pair_products(const Eigen::Ref<const Eigen::MatrixXd>& x, Eigen::MatrixXd& out) {
  const Eigen::Index n = x.cols();
  out.resize(x.rows(), n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out.col(i * n + j) = x.col(i).cwiseProduct(x.col(j));
}

// Row-major copy of m into a flat vector.
std::vector<double> flatten_row_major(const Eigen::MatrixXd& m) {
  std::vector<double> flat(static_cast<std::size_t>(m.size()));
  std::size_t idx = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) flat[idx++] = m(r, c);
  return flat;
}

double gaussian_product_moment(const std::vector<int>& counts) {
  double m = 1.0;
  for (const int c : counts) m *= gaussian_moment(c);
  return m;
}

}  // namespace

CumulantTensor::CumulantTensor(int order, Eigen::Index n) : order_(order), n_(n) {
  if (order != 3 && order != 4) fail(ErrorCode::InvalidArgument, "only orders 3 and 4 are supported");
  check_dim(n);
  values_.assign(static_cast<std::size_t>(std::pow(n, order)), 0.0);
}

double CumulantTensor::operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k) const {
  return values_[static_cast<std::size_t>((i * n_ + j) * n_ + k)];
}

double CumulantTensor::operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k,
                                  Eigen::Index l) const {
  return values_[static_cast<std::size_t>(((i * n_ + j) * n_ + k) * n_ + l)];
}

Eigen::MatrixXd CumulantTensor::unfold() const {
  const Eigen::Index rows = static_cast<Eigen::Index>(values_.size()) / n_;
  Eigen::MatrixXd m(rows, n_);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < n_; ++c) m(r, c) = values_[static_cast<std::size_t>(r * n_ + c)];
  return m;
}

CumulantTensor joint_cumulant_order3(const SampleSet& s) {
  const Eigen::Index n = s.ambient_dim();
  check_dim(n);
  const Eigen::MatrixXd x = centered(s);
  const Eigen::Index N = x.rows();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n * n, n);
  Eigen::MatrixXd pairs;
  for (Eigen::Index start = 0; start < N; start += kChunk) {
    const Eigen::Index rows = std::min(kChunk, N - start);
    const auto block = x.middleRows(start, rows);
    pair_products(block, pairs);
    acc.noalias() += pairs.transpose() * block;
  }
  acc /= static_cast<double>(N);
  CumulantTensor t(3, n);
  t.values() = flatten_row_major(acc);
  return t;
}

CumulantTensor joint_cumulant_order4(const SampleSet& s) {
  const Eigen::Index n = s.ambient_dim();
  check_dim(n);
  const Eigen::MatrixXd x = centered(s);
  const Eigen::Index N = x.rows();
  const Eigen::MatrixXd cov = x.transpose() * x / static_cast<double>(N);
  const double dev = (cov - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (dev > 1e-2)
    fail(ErrorCode::NotIsotropic, "empirical covariance deviates from I by " + std::to_string(dev));

  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n * n, n * n);
  Eigen::MatrixXd pairs;
  for (Eigen::Index start = 0; start < N; start += kChunk) {
    const Eigen::Index rows = std::min(kChunk, N - start);
    pair_products(x.middleRows(start, rows), pairs);
    acc.noalias() += pairs.transpose() * pairs;
  }
  acc /= static_cast<double>(N);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l) {
          const double delta = (i == j && k == l ? 1.0 : 0.0) + (i == k && j == l ? 1.0 : 0.0) +
                               (i == l && j == k ? 1.0 : 0.0);
          acc(i * n + j, k * n + l) -= delta;
        }
  // Symmetrize across the two index pairs so every permutation agrees exactly.
  const Eigen::MatrixXd sym = 0.5 * (acc + acc.transpose());
  CumulantTensor t(4, n);
  t.values() = flatten_row_major(sym);
  auto& v = t.values();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l) {
          std::array<Eigen::Index, 4> idx{i, j, k, l};
          std::sort(idx.begin(), idx.end());
          const auto canonical = ((idx[0] * n + idx[1]) * n + idx[2]) * n + idx[3];
          v[static_cast<std::size_t>(((i * n + j) * n + k) * n + l)] =
              v[static_cast<std::size_t>(canonical)];
        }
  return t;
}

Eigen::MatrixXd cumulant_gram(const SampleSet& s, const std::vector<int>& orders) {
  if (orders.empty()) fail(ErrorCode::InvalidArgument, "at least one cumulant order required");
  const Eigen::Index n = s.ambient_dim();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  for (const int order : orders) {
    if (order == 3) {
      const Eigen::MatrixXd u = joint_cumulant_order3(s).unfold();
      gram.noalias() += u.transpose() * u;
    } else if (order == 4) {
      const Eigen::MatrixXd u = joint_cumulant_order4(s).unfold();
      gram.noalias() += u.transpose() * u;
    } else {
      fail(ErrorCode::InvalidArgument, "cumulant orders must be 3 or 4");
    }
  }
  return 0.5 * (gram + gram.transpose());
}

double gaussian_gram_noise_floor(Eigen::Index n, Eigen::Index N, const std::vector<int>& orders) {
  check_dim(n);
  double total = 0.0;
  for (const int order : orders) {
    const auto entries = static_cast<Eigen::Index>(std::pow(n, order));
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(order));
    for (Eigen::Index flat = 0; flat < entries; ++flat) {
      Eigen::Index rem = flat;
      for (int d = order - 1; d >= 0; --d) {
        idx[static_cast<std::size_t>(d)] = rem % n;
        rem /= n;
      }
      std::vector<int> counts(static_cast<std::size_t>(n), 0);
      for (const auto i : idx) ++counts[static_cast<std::size_t>(i)];
      std::vector<int> doubled(counts);
      for (auto& c : doubled) c *= 2;
      const double second = gaussian_product_moment(doubled);
      const double mean = gaussian_product_moment(counts);
      total += second - mean * mean;
    }
  }
  return total / static_cast<double>(N) / static_cast<double>(n);
}

CumulantKernelResult cumulant_kernel(const SampleSet& s, const std::vector<int>& orders,
                                     double kernel_tol) {
  for (const int o : orders)
    if (o != 3 && o != 4) fail(ErrorCode::InvalidArgument, "cumulant orders must be a subset of {3, 4}");
  const Eigen::Index n = s.ambient_dim();

  CumulantGram rep;
  rep.order_set = orders;
  rep.gram = cumulant_gram(s, orders);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(rep.gram);
  rep.eigvals = eig.eigenvalues();
  rep.eigvecs = eig.eigenvectors();
  rep.noise_floor = gaussian_gram_noise_floor(n, s.N(), orders);
  rep.threshold = std::max(kernel_tol * rep.eigvals.maxCoeff(), 10.0 * rep.noise_floor);

  Eigen::Index k = 0;
  while (k < n && rep.eigvals(k) <= rep.threshold) ++k;
  rep.kernel_dim = k;
  if (k == 0 || k == n) {
    rep.spectral_gap_ratio = std::numeric_limits<double>::infinity();
  } else {
    const double below = std::max(rep.eigvals(k - 1), std::numeric_limits<double>::min());
    rep.spectral_gap_ratio = rep.eigvals(k) / below;
  }
  rep.reliable = rep.spectral_gap_ratio >= 10.0;

  Subspace gaussian = k == 0 ? Subspace::zero(n) : orthonormalize(rep.eigvecs.leftCols(k));
  return {std::move(gaussian), std::move(rep)};
}

}  // namespace ngca
