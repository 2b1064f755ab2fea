#include "ngca/properties.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ngca/cumulant.hpp"
#include "ngca/entropy.hpp"
#include "ngca/error.hpp"
#include "ngca/instance.hpp"
#include "ngca/laws.hpp"
#include "ngca/moments.hpp"
#include "ngca/quadrature.hpp"
#include "ngca/subspace.hpp"

namespace ngca {

namespace {

constexpr std::size_t kMaxMessages = 20;

// Records one check; keeps the running maximum of `err` under stats[stat].
void record(SuiteResult& s, bool ok, const std::string& what, const std::string& stat = {},
            double err = 0.0) {
  ++s.checks;
  if (!stat.empty()) s.stats[stat] = std::max(s.stats.count(stat) ? s.stats[stat] : 0.0, err);
  if (ok) return;
  ++s.failures;
  if (s.messages.size() < kMaxMessages) s.messages.push_back(what);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Subspace random_subspace(Rng& rng, Eigen::Index n, Eigen::Index k) {
  if (k == 0) return Subspace::zero(n);
  return orthonormalize(rng.normal_matrix(n, k));
}

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

bool PropertySummary::all_passed() const {
  return !suites.empty() && std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
}

const std::vector<std::string>& property_suite_names() {
  static const std::vector<std::string> names{"subspace_metric",         "entropy_scaling",
                                              "moment_mixing",           "perturbation_bound",
                                              "spherical_concentration", "cumulant_equivariance"};
  return names;
}

SuiteResult run_subspace_metric_suite(std::uint64_t seed, int cases) {
  SuiteResult s;
  s.name = "subspace_metric";
  Rng rng(seed);
  constexpr double tol = 1e-9;
  for (int c = 0; c < cases; ++c) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.next_u64() % 11);
    const Eigen::Index k = static_cast<Eigen::Index>(rng.next_u64() % static_cast<std::uint64_t>(n + 1));
    const Subspace a = random_subspace(rng, n, k), b = random_subspace(rng, n, k), e = random_subspace(rng, n, k);
    const std::string tag = " (case " + std::to_string(c) + ", n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")";

    const double dab = subspace_distance(a, b), dba = subspace_distance(b, a);
    record(s, std::abs(dab - dba) <= tol, "symmetry" + tag, "max_symmetry_error", std::abs(dab - dba));

    const double dperp = subspace_distance(orthogonal_complement(a), orthogonal_complement(b));
    record(s, std::abs(dab - dperp) <= tol, "complement identity" + tag, "max_complement_error",
           std::abs(dab - dperp));

    const double slack = subspace_distance(a, e) - dab - subspace_distance(b, e);
    record(s, slack <= tol, "triangle inequality" + tag, "max_triangle_excess", std::max(0.0, slack));

    const Eigen::MatrixXd P = a.projector();
    const double idem = (P * P - P).cwiseAbs().maxCoeff();
    const double sym = (P - P.transpose()).cwiseAbs().maxCoeff();
    record(s, idem <= tol, "projector idempotence" + tag, "max_idempotence_error", idem);
    record(s, sym <= tol, "projector symmetry" + tag, "max_symmetry_of_projector_error", sym);
  }
  return s;
}

SuiteResult run_entropy_scaling_suite(std::uint64_t seed) {
  SuiteResult s;
  s.name = "entropy_scaling";
  // Closed form vs quadrature of ∫ f log(f/φ) with f the N(0, λ²) density.
  for (const double lambda : {0.5, 1.0, 2.0}) {
    const double closed = analytic_relative_entropy(ScaledGaussian{lambda});
    const double expected = -std::log(lambda) + 0.5 * (lambda * lambda - 1.0);
    const auto integrand = [lambda](double x) {
      const double f = std::exp(-0.5 * x * x / (lambda * lambda)) / (lambda * std::sqrt(2.0 * M_PI));
      const double log_ratio = -std::log(lambda) - 0.5 * x * x / (lambda * lambda) + 0.5 * x * x;
      return f * log_ratio;
    };
    const double L = 40.0 * lambda;
    const std::vector<double> bp{-L, -lambda, 0.0, lambda, L};
    const double quad = integrate(integrand, bp, 1e-12).value;
    const std::string tag = " (lambda=" + fmt(lambda) + ")";
    record(s, std::abs(closed - expected) <= 1e-12, "closed form" + tag, "max_closed_form_error",
           std::abs(closed - expected));
    record(s, std::abs(quad - expected) <= 1e-6, "quadrature vs identity" + tag, "max_quadrature_error",
           std::abs(quad - expected));
  }
  // Estimator-level: Ŝ(λZ) − Ŝ(Z) tracks −log λ + (λ²−1)/2.
  Rng rng(seed);
  const long N = 100'000;
  const HistogramConfig cfg = default_config(N, 2.0, 0.3);
  const Eigen::VectorXd z = rng.normal_vector(N);
  const double base = relative_entropy(as_span(z), cfg).value;
  for (const double lambda : {0.8, 1.25}) {
    const Eigen::VectorXd scaled = lambda * rng.normal_vector(N);
    const double diff = relative_entropy(as_span(scaled), cfg).value - base;
    const double expected = -std::log(lambda) + 0.5 * (lambda * lambda - 1.0);
    record(s, std::abs(diff - expected) <= 0.05, "estimator scaling (lambda=" + fmt(lambda) + ")",
           "max_estimator_error", std::abs(diff - expected));
  }
  return s;
}

SuiteResult run_moment_mixing_suite(std::uint64_t seed, long N) {
  SuiteResult s;
  s.name = "moment_mixing";
  Rng master(seed);
  std::uint64_t stream = 0;
  double worst_z = 0.0;
  for (const LawKind kind : {LawKind::Uniform, LawKind::LaplaceTruncated, LawKind::TwoPointSmoothed,
                             LawKind::GaussianMixtureSymmetric, LawKind::ShiftedExponential}) {
    const NonGaussianLaw law = NonGaussianLaw::make(kind, {});
    const std::vector<double> my = law.moments_up_to(4);
    for (const double t : {0.2, 0.5, 0.8}) {
      Rng rng = master.substream(stream++);
      Eigen::VectorXd w(N);
      const double c = std::sqrt(1.0 - t * t);
      for (long i = 0; i < N; ++i) w(i) = t * law.sample(rng) + c * rng.normal();
      const MomentVector mv = empirical_moments(as_span(w), 4);
      for (const int k : {3, 4}) {
        const double predicted = moment_mixing(my, t, k);
        const double observed = mv.value(k) - gaussian_moment(k);
        const double z = std::abs(observed - predicted) / mv.std_error(k);
        worst_z = std::max(worst_z, z);
        record(s, z <= 4.0,
               std::string(to_string(kind)) + " k=" + std::to_string(k) + " t=" + fmt(t) + ": predicted " +
                   fmt(predicted) + ", observed " + fmt(observed) + " (" + fmt(z) + " std errors)");
      }
    }
  }
  s.stats["max_std_errors"] = worst_z;

  // Structural identities of the smoothing bounds.
  for (int k = 3; k <= 6; ++k) {
    record(s, predicted_smoothed_gap(0.7, k, 0.0).value == 0.7, "zero-noise gap k=" + std::to_string(k));
    for (int i = 0; i <= 30; ++i) {
      const double t = 0.01 * i;
      const SmoothedGap g = predicted_smoothed_gap(1.0, k, t);
      // Only k <= 4 has (1+√(k−3))^k <= k^{k/2}; beyond that the simplified
      // form is not a lower bound of the exact one.
      if (k <= 4 && g.value > 0.0 && g.bernoulli > 0.0)
        record(s, g.value >= g.bernoulli - 1e-12, "exact bound below Bernoulli form at k=" + std::to_string(k) + " t=" + fmt(t));
    }
  }
  for (int k = 2; k <= 12; k += 2)
    record(s, gaussian_moment(k) == (k - 1) * gaussian_moment(k - 2), "Gaussian moment recurrence k=" + std::to_string(k));
  return s;
}

SuiteResult run_perturbation_bound_suite(std::uint64_t seed, int trials) {
  SuiteResult s;
  s.name = "perturbation_bound";
  Rng rng(seed);
  const int combos = 8;
  const int per = std::max(1, trials / combos);
  double worst_ratio = 0.0;
  int total = 0;
  for (const Eigen::Index k : {2, 5})
    for (const Eigen::Index n : {8, 16})
      for (const double eps : {1e-3, 1e-5})
        for (int trial = 0; trial < per; ++trial, ++total) {
          const Eigen::MatrixXd lambdas = haar_orthogonal(rng, n).leftCols(k);
          Eigen::MatrixXd gammas(n, k);
          for (Eigen::Index i = 0; i < k; ++i) {
            // 1 − ⟨λ_i, γ_i⟩ = ε_i ∈ (0, ε], with ε attained by the first column.
            const double ei = i == 0 ? eps : eps * rng.uniform();
            const double cos_t = 1.0 - ei;
            Eigen::VectorXd w = rng.normal_vector(n);
            w -= lambdas.col(i).dot(w) * lambdas.col(i);
            w.normalize();
            gammas.col(i) = cos_t * lambdas.col(i) + std::sqrt(1.0 - cos_t * cos_t) * w;
          }
          const PerturbationReport r = check_perturbation_bound(lambdas, gammas);
          worst_ratio = std::max(worst_ratio, r.distance / r.bound);
          record(s, r.holds,
                 "k=" + std::to_string(k) + " n=" + std::to_string(n) + " eps=" + fmt(eps) + ": distance " +
                     fmt(r.distance) + " > bound " + fmt(r.bound));
        }
  s.stats["trials"] = total;
  s.stats["max_distance_over_bound"] = worst_ratio;
  return s;
}

double spherical_cap_probability(int n, double alpha) {
  if (n < 2 || !(alpha >= 0.0 && alpha <= 1.0)) fail(ErrorCode::InvalidArgument, "cap probability needs n >= 2, alpha in [0, 1]");
  const double e = 0.5 * (n - 3);
  const auto f = [e](double x) { return std::pow(std::max(0.0, 1.0 - x * x), e); };
  if (n == 2) {
    // Density ∝ (1−x²)^{−1/2}: use the closed form to avoid the endpoint singularity.
    return 1.0 - std::asin(alpha) / (M_PI / 2.0);
  }
  const std::vector<double> all{0.0, alpha, 1.0};
  const std::vector<double> tail{alpha, 1.0};
  const double total = integrate(f, all, 1e-12).value;
  return integrate(f, tail, 1e-12).value / total;
}

SuiteResult run_spherical_concentration_suite(std::uint64_t seed, int n, long draws) {
  SuiteResult s;
  s.name = "spherical_concentration";
  Rng rng(seed);
  const double alpha = 1.0 / (static_cast<double>(n) * n);
  const double bound = spherical_cap_probability(n, alpha);
  s.stats["cap_bound"] = bound;

  const Eigen::MatrixXd Q = haar_orthogonal(rng, n);
  const Eigen::MatrixXd V1 = Q.leftCols(2);       // two-dimensional V₁
  const Eigen::MatrixXd V1_line = Q.leftCols(1);  // worst case: a line
  const Eigen::MatrixXd V2 = Q.rightCols(5);
  long hits = 0, hits_line = 0, hits_ratio = 0;
  for (long i = 0; i < draws; ++i) {
    const UnitVector r = random_unit_vector(rng, n);
    const double p1 = (V1.transpose() * r.coords()).norm();
    hits += p1 >= alpha;
    hits_line += std::abs(V1_line.col(0).dot(r.coords())) >= alpha;
    hits_ratio += p1 >= alpha * (V2.transpose() * r.coords()).norm();
  }
  const double emp = static_cast<double>(hits) / draws;
  const double emp_line = static_cast<double>(hits_line) / draws;
  const double emp_ratio = static_cast<double>(hits_ratio) / draws;
  s.stats["empirical_2d"] = emp;
  s.stats["empirical_line"] = emp_line;
  s.stats["empirical_ratio"] = emp_ratio;
  record(s, emp >= bound, "Pr[|P_V1 r| >= 1/n^2] = " + fmt(emp) + " below cap bound " + fmt(bound));
  record(s, emp_ratio >= bound, "ratio form " + fmt(emp_ratio) + " below cap bound " + fmt(bound));
  // For a line the bound is attained; the empirical rate must match it.
  const double se = std::sqrt(bound * (1.0 - bound) / draws);
  record(s, std::abs(emp_line - bound) <= 4.0 * se + 1e-12,
         "line case " + fmt(emp_line) + " differs from cap volume " + fmt(bound));
  return s;
}

SuiteResult run_cumulant_equivariance_suite(std::uint64_t seed) {
  SuiteResult s;
  s.name = "cumulant_equivariance";
  Rng rng(seed);
  const Eigen::Index n = 6, N = 100'000;
  const NgcaInstance inst = synthesize_instance(n, 4, {NonGaussianLaw::uniform(), NonGaussianLaw::uniform()}, 4, rng);
  const SampleSet x = isotropize(draw_samples(inst, N, rng)).samples;
  const std::vector<int> orders{3, 4};
  const Eigen::MatrixXd G = cumulant_gram(x, orders);
  const double budget = 8.0 * n * n / std::sqrt(static_cast<double>(N));
  s.stats["budget"] = budget;
  for (int pair = 0; pair < 5; ++pair) {
    const Eigen::MatrixXd Q = haar_orthogonal(rng, n);
    // Common random numbers: the same samples, rotated.
    const SampleSet qx(x.data() * Q.transpose(), x.seed());
    const double dev = (cumulant_gram(qx, orders) - Q * G * Q.transpose()).norm();
    record(s, dev <= budget, "rotation pair " + std::to_string(pair) + ": deviation " + fmt(dev), "max_deviation", dev);
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  const double lo = es.eigenvalues().minCoeff();
  record(s, lo >= -1e-8, "Gram not PSD: min eigenvalue " + fmt(lo), "min_eigenvalue_deficit", std::max(0.0, -lo));
  record(s, (G - G.transpose()).cwiseAbs().maxCoeff() <= 1e-8, "Gram not symmetric");
  return s;
}

PropertySummary run_property_suite(const std::string& selector, std::uint64_t seed) {
  const auto& names = property_suite_names();
  const bool all = selector.empty() || selector == "all";
  if (!all && std::find(names.begin(), names.end(), selector) == names.end())
    fail(ErrorCode::InvalidArgument, "unknown property suite '" + selector + "'");
  PropertySummary out;
  const Rng master(seed);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!all && names[i] != selector) continue;
    const std::uint64_t sub = master.substream(i).next_u64();
    switch (i) {
      case 0: out.suites.push_back(run_subspace_metric_suite(sub)); break;
      case 1: out.suites.push_back(run_entropy_scaling_suite(sub)); break;
      case 2: out.suites.push_back(run_moment_mixing_suite(sub)); break;
      case 3: out.suites.push_back(run_perturbation_bound_suite(sub)); break;
      case 4: out.suites.push_back(run_spherical_concentration_suite(sub)); break;
      case 5: out.suites.push_back(run_cumulant_equivariance_suite(sub)); break;
    }
  }
  return out;
}

nlohmann::json to_json(const PropertySummary& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : s.suites)
    arr.push_back({{"name", r.name}, {"passed", r.passed()}, {"checks", r.checks}, {"failures", r.failures},
                   {"stats", r.stats}, {"messages", r.messages}});
  return {{"all_passed", s.all_passed()}, {"suites", arr}};
}

}  // namespace ngca
