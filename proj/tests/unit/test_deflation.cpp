#include "doctest.h"
#include "helpers.hpp"

#include "ngca/deflation.hpp"
#include "ngca/instance.hpp"
#include "ngca/moments.hpp"

using namespace ngca;
using testing::span_of;

namespace {

void check_result_invariants(const NgcaResult& r, Eigen::Index n) {
  CHECK(static_cast<Eigen::Index>(r.gaussian_directions.size()) + r.nongaussian_subspace.dim() == n);
  const Subspace g = r.gaussian_span();
  if (g.dim() > 0)
    CHECK((g.basis().transpose() * g.basis() - Eigen::MatrixXd::Identity(g.dim(), g.dim())).cwiseAbs().maxCoeff() <= 1e-8);
  if (g.dim() > 0 && r.nongaussian_subspace.dim() > 0)
    CHECK((g.basis().transpose() * r.nongaussian_subspace.basis()).cwiseAbs().maxCoeff() <= 1e-8);
  for (const auto& l : r.levels)
    if (l.accepted) {
      CHECK(l.outcome.final_grad_norm <= l.eps1);
      CHECK(l.outcome.final_entropy <= l.eps2);
    }
}

}  // namespace

TEST_SUITE("deflation") {

TEST_CASE("termination thresholds") {
  const auto t = termination_thresholds(1.2, 1.0, 4, 8);
  CHECK(t.A == doctest::Approx(64 * (3 + std::log(1 / 1.2))));
  CHECK(t.A == doctest::Approx(180.3).epsilon(1e-3));
  CHECK(t.raw_eps2 == doctest::Approx(0.5 * 1.44 * std::pow(t.A, -8)));
  CHECK(t.raw_eps2 == doctest::Approx(6.5e-19).epsilon(0.02));
  CHECK(t.eps2 == 1e-4);
  CHECK(t.eps1 == doctest::Approx(1e-5));
  const auto t3 = termination_thresholds(1.0, 1.0, 3, 8);
  CHECK(t3.A == doctest::Approx(108));
  CHECK(t3.raw_eps2 == doctest::Approx(0.5 * std::pow(108.0, -6)));
  CHECK(t3.raw_eps2 == doctest::Approx(3.1e-13).epsilon(0.02));
  // Monotone in D before the floor.
  CHECK(termination_thresholds(2.0, 1.0, 3, 8, 0.0).eps2 > termination_thresholds(1.0, 1.0, 3, 8, 0.0).eps2);
}

TEST_CASE("practical thresholds never undercut the recipe") {
  const auto cfg = default_config(200000, 1.5, 0.03);
  const auto p = practical_thresholds(0.6, 1.5, 4, 8, 200000, cfg);
  const auto t = termination_thresholds(0.6, 1.5, 4, 8);
  CHECK(p.eps2 >= t.eps2);
  CHECK(p.eps1 >= t.eps1);
  CHECK(p.eps2 >= 2.5 * estimator_bias_scale(200000, cfg.bucket_width_B) - 1e-15);
}

TEST_CASE("noise level") {
  CHECK(noise_level(3) == doctest::Approx((-std::sqrt(27.0) + std::sqrt(30.0)) / 3).epsilon(1e-12));
  CHECK(noise_level(3) == doctest::Approx(0.0937).epsilon(1e-3));
  CHECK(noise_level(4) == doctest::Approx(0.0312).epsilon(2e-3));
  for (int r : {3, 4, 5}) {
    const double t = noise_level_root(r);
    CHECK(1 - r * t * t / 2 - t * std::pow(r, r / 2.0) == doctest::Approx(0.5).epsilon(1e-9));
  }
  CHECK(noise_level(8) == 0.01);  // clipped from below
}

TEST_CASE("full config validation") {
  FullConfig c;
  CHECK_NOTHROW(c.validate());
  c.restarts_per_level = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.noise_t_prime = 1.0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("full_alg: pure Gaussian recovers every direction") {
  Rng rng(1);
  const auto inst = synthesize_instance(4, 4, {}, 4, rng);
  const auto s = isotropize(draw_samples(inst, 100000, rng)).samples;
  const auto res = full_alg(s, default_full_config(100000, 4), rng);
  CHECK(res.gaussian_directions.size() == 4);
  CHECK(res.nongaussian_subspace.dim() == 0);
  check_result_invariants(res, 4);
  CHECK(std::holds_alternative<lineage::Smooth>(res.smoothed.lineage().back()));
}

TEST_CASE("full_alg: no Gaussian part stops at level 0") {
  Rng rng(2);
  const std::vector<NonGaussianLaw> laws(3, NonGaussianLaw::uniform());
  const auto inst = synthesize_instance(3, 0, laws, 4, rng);
  const auto s = isotropize(draw_samples(inst, 100000, rng)).samples;
  FullConfig cfg = default_full_config(100000, 3, *inst.D, inst.K());
  cfg.descent.max_iters = 60;
  cfg.restarts_per_level = 2;
  const auto res = full_alg(s, cfg, rng);
  CHECK(res.gaussian_directions.empty());
  CHECK(res.nongaussian_subspace.dim() == 3);
  REQUIRE(res.levels.size() == 1);
  CHECK_FALSE(res.levels[0].accepted);
  CHECK(res.levels[0].restarts_used == 2);
  for (double e : res.levels[0].restart_final_entropy) CHECK(e > cfg.descent.eps2);
  check_result_invariants(res, 3);

  // Moment-gap persistence: the returned space is all of R^3, so no Gaussian
  // leakage; every direction keeps a gap of at least D (4 std errors slack).
  Rng dirs(3);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd v = res.nongaussian_subspace.basis() * random_unit_vector(dirs, 3).coords();
    const Eigen::VectorXd m = s.data() * v;
    const auto mv = empirical_moments(span_of(m), 4);
    double best = 0;
    for (int k = 3; k <= 4; ++k) best = std::max(best, std::abs(mv.value(k) - gaussian_moment(k)) + 4 * mv.std_error(k));
    CHECK(best >= predicted_smoothed_gap(*inst.D, 4, 0.0).value);
  }
}

TEST_CASE("full_alg: mixed instance keeps its bookkeeping straight") {
  Rng rng(4);
  const std::vector<NonGaussianLaw> laws(2, NonGaussianLaw::uniform());
  const auto inst = synthesize_instance(5, 3, laws, 4, rng);
  const auto s = isotropize(draw_samples(inst, 50000, rng)).samples;
  FullConfig cfg = default_full_config(50000, 5, *inst.D, inst.K());
  cfg.descent.max_iters = 30;
  cfg.restarts_per_level = 2;
  const auto res = full_alg(s, cfg, rng);
  check_result_invariants(res, 5);
  CHECK(res.levels.size() <= 5);
  // At most n levels; every accepted level shrinks the search space by one.
  for (std::size_t i = 0; i < res.levels.size(); ++i) CHECK(res.levels[i].ambient_dim == 5 - static_cast<Eigen::Index>(i));
  // Complement identity on the result when ranks agree.
  if (res.nongaussian_subspace.dim() == 2)
    CHECK(std::abs(subspace_distance(res.gaussian_span(), inst.gamma) -
                   subspace_distance(res.nongaussian_subspace, inst.nongaussian())) <= 1e-9);
  // Seeded determinism.
  Rng again(4);
  const auto inst2 = synthesize_instance(5, 3, laws, 4, again);
  const auto s2 = isotropize(draw_samples(inst2, 50000, again)).samples;
  const auto res2 = full_alg(s2, cfg, again);
  CHECK(res2.nongaussian_subspace.basis() == res.nongaussian_subspace.basis());
}

}  // TEST_SUITE
