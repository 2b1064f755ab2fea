// End-to-end acceptance: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ngca/cumulant.hpp"
#include "ngca/deflation.hpp"
#include "ngca/entropy.hpp"
#include "ngca/instance.hpp"
#include "ngca/moments.hpp"
#include "ngca/properties.hpp"
#include "ngca/sample_set.hpp"
#include "ngca/subspace.hpp"

using namespace ngca;

namespace {

constexpr int kSeeds = 10;
constexpr double kUniformS = 0.17649;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s — %s [%.0fs]\n", o.pass ? "PASS" : "FAIL", id, title.c_str(),
              o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Same stream layout as the experiment runner: 1 instance, 2 samples, 3 algorithm.
struct Planted {
  NgcaInstance inst;
  IsotropizeResult iso;
  Rng algo;
};

Planted plant(Eigen::Index n, Eigen::Index p, const std::vector<NonGaussianLaw>& laws, Eigen::Index N,
              std::uint64_t seed) {
  const Rng master(seed);
  Rng inst_rng = master.substream(1), sample_rng = master.substream(2);
  NgcaInstance inst = synthesize_instance(n, p, laws, 4, inst_rng);
  const SampleSet raw = draw_samples(inst, N, sample_rng);
  return {std::move(inst), isotropize(raw), master.substream(3)};
}

FullConfig default_for(const Planted& pl, Eigen::Index N) {
  return default_full_config(static_cast<std::size_t>(N), static_cast<int>(pl.inst.n), pl.inst.D.value_or(0.5),
                             pl.inst.K(), pl.inst.r);
}

// Whitened direction w carries the functional ⟨X − μ, T·w⟩.
Subspace to_original(const Subspace& s, const Eigen::MatrixXd& T) {
  if (s.dim() == 0) return s;
  return orthonormalize(T * s.basis());
}

const std::vector<NonGaussianLaw> kTwoUniforms{NonGaussianLaw::uniform(), NonGaussianLaw::uniform()};

struct FlagshipRun {
  Planted pl;
  NgcaResult res;
  double seconds;
};
std::vector<FlagshipRun> flagship_runs;

Outcome flagship_recovery() {
  const Eigen::Index N = 200000;
  int good = 0;
  double worst_time = 0;
  std::string ds;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    Planted pl = plant(8, 6, kTwoUniforms, N, static_cast<std::uint64_t>(seed));
    const auto t0 = std::chrono::steady_clock::now();
    NgcaResult res = full_alg(pl.iso.samples, default_for(pl, N), pl.algo);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    worst_time = std::max(worst_time, secs);
    const Subspace rec = to_original(res.nongaussian_subspace, pl.iso.transform);
    const Subspace truth = pl.inst.nongaussian();
    if (rec.dim() == truth.dim()) {
      const double d = subspace_distance(rec, truth);
      ds += fmt("%.3f ", d);
      if (d <= 0.35 && secs <= 300) ++good;
    } else {
      ds += "dim" + std::to_string(rec.dim()) + " ";
    }
    flagship_runs.push_back({std::move(pl), std::move(res), secs});
  }
  return {good >= 8, std::to_string(good) + "/10 seeds with d <= 0.35; d per seed: " + ds +
                         fmt("; slowest run %.0fs (limit 300s)", worst_time)};
}

Outcome entropy_accuracy() {
  const std::size_t N = 100000;
  const HistogramConfig cfg = default_config(N, 1.0, 0.3);
  const NonGaussianLaw u = NonGaussianLaw::uniform();
  const double su = analytic_relative_entropy(u);
  const double sg = analytic_relative_entropy(ScaledGaussian{1.0});
  int ok_g = 0, ok_u = 0;
  double worst_g = 0, worst_u = 0;
  for (int seed = 0; seed < 20; ++seed) {
    Rng rng(1000 + seed);
    const Eigen::VectorXd g = rng.normal_vector(static_cast<Eigen::Index>(N));
    Eigen::VectorXd x(static_cast<Eigen::Index>(N));
    for (auto& v : x) v = u.sample(rng);
    const double eg = std::abs(relative_entropy({g.data(), N}, cfg).value - sg);
    const double eu = std::abs(relative_entropy({x.data(), N}, cfg).value - su);
    ok_g += eg <= 0.03;
    ok_u += eu <= 0.03;
    worst_g = std::max(worst_g, eg);
    worst_u = std::max(worst_u, eu);
  }
  const bool oracle = std::abs(su - kUniformS) < 1e-4 && std::abs(sg) < 1e-12;
  return {oracle && ok_g >= 19 && ok_u >= 19,
          std::to_string(ok_g) + "/20 Gaussian, " + std::to_string(ok_u) + "/20 uniform within 0.03" +
              fmt(" (worst %.4f / %.4f; uniform oracle %.5f)", worst_g, worst_u, su)};
}

Outcome suite_outcome(const SuiteResult& r) {
  std::string d = std::to_string(r.checks - r.failures) + "/" + std::to_string(r.checks) + " checks";
  for (const auto& [k, v] : r.stats) d += "; " + k + "=" + fmt("%.4g", v);
  if (!r.messages.empty()) d += "; first failure: " + r.messages.front();
  return {r.passed(), d};
}

Outcome cumulant_parity() {
  const Eigen::Index N = 500000;
  const std::vector<int> orders{3, 4};
  int good = 0;
  std::string ds;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    const Planted pl = plant(8, 6, kTwoUniforms, N, static_cast<std::uint64_t>(seed));
    const auto kr = cumulant_kernel(pl.iso.samples, orders);
    const Subspace rec = to_original(orthogonal_complement(kr.gaussian), pl.iso.transform);
    if (rec.dim() == 2) {
      const double d = subspace_distance(rec, pl.inst.nongaussian());
      good += d <= 0.25;
      ds += fmt("%.3f ", d);
    } else {
      ds += "dim" + std::to_string(rec.dim()) + " ";
    }
  }
  // Pure Gaussian data at the same size.
  Rng rng(99);
  const SampleSet g(rng.normal_matrix(N, 8), 99);
  const auto gk = cumulant_kernel(isotropize(g).samples, orders);
  const double top = gk.report.eigvals.maxCoeff();
  const double floor = gaussian_gram_noise_floor(8, N, orders);
  const bool spectrum_ok = top <= 10 * floor;
  return {good >= 8 && spectrum_ok, std::to_string(good) + "/10 seeds with d <= 0.25; d per seed: " + ds +
                                        fmt("; Gaussian top eigenvalue %.3g vs 10x floor %.3g", top, 10 * floor)};
}

Outcome termination() {
  int stop0 = 0, all_gauss = 0;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    {
      const Eigen::Index N = 200000;
      Planted pl = plant(3, 0, {NonGaussianLaw::uniform(), NonGaussianLaw::uniform(), NonGaussianLaw::uniform()},
                         N, static_cast<std::uint64_t>(seed));
      const NgcaResult r = full_alg(pl.iso.samples, default_for(pl, N), pl.algo);
      stop0 += r.gaussian_directions.empty() && r.nongaussian_subspace.dim() == 3 && r.levels.size() == 1 &&
               !r.levels[0].accepted;
    }
    {
      const Eigen::Index N = 100000;
      Planted pl = plant(4, 4, {}, N, static_cast<std::uint64_t>(100 + seed));
      const NgcaResult r = full_alg(pl.iso.samples, default_for(pl, N), pl.algo);
      all_gauss += r.gaussian_directions.size() == 4 && r.nongaussian_subspace.dim() == 0;
    }
  }
  return {stop0 == kSeeds && all_gauss == kSeeds,
          "no-Gaussian stopped at level 0 on " + std::to_string(stop0) + "/10; pure Gaussian fully recovered on " +
              std::to_string(all_gauss) + "/10"};
}

// After k accepted levels the search space B_k is the complement of the first
// k accepted directions. Directions of B_k inside the whitened ground-truth
// Gaussian subspace must still look Gaussian in the smoothed samples.
Outcome deflated_preservation() {
  if (flagship_runs.empty()) return {false, "flagship runs unavailable"};
  int seeds_ok = 0, tested = 0, levels_with_dirs = 0;
  double worst_z = 0;
  for (const auto& run : flagship_runs) {
    const Eigen::MatrixXd Tinv = run.pl.iso.transform.inverse();
    const Subspace gw = orthonormalize(Tinv * run.pl.inst.gamma.basis());
    const Eigen::MatrixXd& Y = run.res.smoothed.data();
    bool ok = true;
    const auto k_max = run.res.gaussian_directions.size();
    for (std::size_t k = 1; k <= k_max; ++k) {
      Eigen::MatrixXd acc(8, static_cast<Eigen::Index>(k));
      for (std::size_t i = 0; i < k; ++i) acc.col(static_cast<Eigen::Index>(i)) = run.res.gaussian_directions[i].coords();
      const Subspace Bk = orthogonal_complement(orthonormalize(acc));
      const Eigen::Index m = std::max<Eigen::Index>(0, gw.dim() - static_cast<Eigen::Index>(k));
      if (m == 0) continue;
      ++levels_with_dirs;
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(Bk.basis().transpose() * gw.basis(), Eigen::ComputeThinU);
      const Eigen::MatrixXd dirs = Bk.basis() * svd.matrixU().leftCols(m);
      for (Eigen::Index j = 0; j < m; ++j) {
        const Eigen::VectorXd x = Y * dirs.col(j).normalized();
        const auto mv = empirical_moments({x.data(), static_cast<std::size_t>(x.size())}, 4);
        for (int ord : {3, 4}) {
          const double z = std::abs(mv.value(ord) - gaussian_moment(ord)) / mv.std_error(ord);
          worst_z = std::max(worst_z, z);
          ++tested;
          if (z > 4) ok = false;
        }
      }
    }
    seeds_ok += ok;
  }
  const bool nonvacuous = tested > 0;
  return {nonvacuous && seeds_ok == kSeeds,
          std::to_string(seeds_ok) + "/10 seeds clean; " + std::to_string(tested) + " moment tests over " +
              std::to_string(levels_with_dirs) + " deflated levels" + fmt("; worst |z| %.2f (limit 4)", worst_z)};
}

}  // namespace

int main() {
  const std::uint64_t seed = 20240601;
  report(1, "flagship entropy-descent recovery", flagship_recovery);
  report(2, "entropy estimator accuracy", entropy_accuracy);
  report(3, "entropy scaling law", [&] { return suite_outcome(run_entropy_scaling_suite(seed + 3)); });
  report(4, "moment mixing vs Monte Carlo", [&] { return suite_outcome(run_moment_mixing_suite(seed + 4)); });
  report(5, "perturbation bound", [&] { return suite_outcome(run_perturbation_bound_suite(seed + 5, 200)); });
  report(6, "cumulant baseline parity", cumulant_parity);
  report(7, "subspace metric identities", [&] { return suite_outcome(run_subspace_metric_suite(seed + 7, 100)); });
  report(8, "termination on exhausted Gaussian part", termination);
  report(9, "spherical concentration", [&] { return suite_outcome(run_spherical_concentration_suite(seed + 9)); });
  report(10, "deflated-model Gaussian preservation", deflated_preservation);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
