#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace ngca {

// Seeded generator passed explicitly to every randomized operation. Substreams
// are derived by hashing (seed, stream id) so that blocks of work can be
// generated independently and still reproduce bit-for-bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t seed() const noexcept { return seed_; }

  // Independent generator for a numbered substream of this one's seed.
  Rng substream(std::uint64_t stream_id) const;

  double normal();
  double uniform();  // [0, 1)
  std::uint64_t next_u64();

  Eigen::VectorXd normal_vector(Eigen::Index n);
  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace ngca
