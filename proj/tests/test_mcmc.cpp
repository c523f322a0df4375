#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ricci/error.hpp"
#include "ricci/mcmc_bounds.hpp"
#include "ricci/model_zoo.hpp"
#include "ricci/oracle_bench.hpp"
#include "support.hpp"

using namespace ricci;

namespace {

// Var_q(Z) for Z = sum_{i=t0+1}^N f(X_i) / (N - t0), X_0 ~ q, by matrix powers.
double exact_z_variance(const ChainSpec& chain, const Vector& q, const Vector& f, std::size_t N, std::size_t t0) {
  const Matrix P = chain.kernel().dense();
  std::vector<Vector> law;  // law of X_i as a column
  Vector v = q;
  for (std::size_t i = 1; i <= N; ++i) {
    v = P.transpose() * v;
    law.push_back(v);
  }
  std::vector<Vector> Pf(N, f);  // Pf[m] = P^m f
  for (std::size_t m = 1; m < N; ++m) Pf[m] = P * Pf[m - 1];
  double second = 0.0;
  double first = 0.0;
  for (std::size_t i = t0 + 1; i <= N; ++i) {
    first += law[i - 1].dot(f);
    for (std::size_t j = i; j <= N; ++j) {
      const double e = law[i - 1].dot(f.cwiseProduct(Pf[j - i]));
      second += i == j ? e : 2.0 * e;
    }
  }
  const double n = static_cast<double>(N - t0);
  return second / (n * n) - (first / n) * (first / n);
}

}  // namespace

TEST(Mcmc, StationaryPlanHasZeroBias) {
  const auto chain = two_state_chain(0.25, 0.25);
  const auto prof = curvature_profile(*chain, 10);
  const auto plan = make_plan(chain, chain->pi(), 100, 0, 1, 1.0, prof);
  EXPECT_EQ(plan.w1_q_pi, 0.0);
  EXPECT_EQ(bias_bound(plan, prof), 0.0);
}

TEST(Mcmc, TwoStateBiasExample) {
  const auto chain = two_state_chain(0.25, 0.25);
  const auto prof = curvature_profile(*chain, 10);
  const auto plan = make_plan(chain, Distribution::dirac(2, 0), 10, 0, 1, 1.0, prof);
  EXPECT_NEAR(bias_bound(plan, prof), 0.05, 1e-12);
  Vector f(2);
  f << 0.0, 1.0;
  EXPECT_LE(exact_bias(*chain, plan.q.weights(), f, 10, 0), 0.05);
  const auto later = make_plan(chain, Distribution::dirac(2, 0), 10, 5, 1, 1.0, prof);
  EXPECT_LE(bias_bound(later, prof), bias_bound(plan, prof));
}

TEST(Mcmc, PlanValidation) {
  const auto chain = two_state_chain(0.25, 0.25);
  const auto prof = curvature_profile(*chain, 4);
  EXPECT_THROW(make_plan(chain, chain->pi(), 10, 10, 1, 1.0, prof), Error);
  EXPECT_THROW(make_plan(chain, chain->pi(), 10, 0, 0, 1.0, prof), Error);
}

TEST(Mcmc, BoundsDominateExactMoments) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 8;
    const Matrix d = testkit::random_metric(rng, n);
    auto chain = std::make_shared<const ChainSpec>(testkit::make_chain(d, testkit::random_kernel(rng, n)));
    const auto prof = curvature_profile(*chain, 10);
    const auto lag = best_decay_lag(prof);
    if (!lag) continue;
    const auto g = geometry(*chain);
    const Vector q = testkit::random_measure(rng, n, 1 + trial % n);
    const std::size_t N = 30;
    const std::size_t t0 = trial % 4;
    auto plan = make_plan(chain, Distribution(q), N, t0, *lag, 1.0, prof);
    plan.K = best_variance_lag(plan, prof, g);
    for (int i = 0; i < 5; ++i) {
      const Vector f = testkit::random_lipschitz(rng, d);
      EXPECT_LE(exact_bias(*chain, q, f, N, t0), bias_bound(plan, prof) + 1e-12);
      EXPECT_LE(exact_z_variance(*chain, q, f, N, t0), mcmc_variance_bound(plan, prof, g) + 1e-12);
    }
  }
}

TEST(Mcmc, SimulationIsReproducibleAcrossWorkers) {
  const auto chain = curie_weiss_chain(5, 0.5, 0.0, Scan::kRandom);
  const auto prof = curvature_profile(*chain, 5);
  const auto plan = make_plan(chain, Distribution::dirac(chain->size(), 0), 50, 5, 1, 1.0, prof);
  const Vector f = chain->space().distances().row(0).transpose();
  const auto a = simulate(plan, f, 2000, 99, 1);
  const auto b = simulate(plan, f, 2000, 99, 4);
  EXPECT_EQ(a.Z, b.Z);
  EXPECT_EQ(a.variance, b.variance);
  const auto c = simulate(plan, f, 2000, 100, 1);
  EXPECT_NE(a.Z, c.Z);
}

TEST(Mcmc, SimulationMatchesExactMean) {
  const auto chain = binary_cube_chain(5, 1);
  const auto prof = curvature_profile(*chain, 5, PairSelection::geodesic(1.0));
  const auto plan = make_plan(chain, Distribution::dirac(chain->size(), 0), 40, 3, 1, 1.0, prof);
  const Vector f = chain->space().distances().row(0).transpose();
  const auto sim = simulate(plan, f, 20000, 5, 2);
  Vector law = plan.q.weights();
  double exact_mean = 0.0;
  for (std::size_t i = 1; i <= 40; ++i) {
    law = chain->kernel().step(law);
    if (i > 3) exact_mean += law.dot(f) / 37.0;
  }
  EXPECT_NEAR(sim.mean, exact_mean, 5.0 * sim.se_mean);
}

TEST(Mcmc, EmpiricalTail) {
  const auto t = empirical_tail({0.0, 1.0, 2.0, 3.0}, 1.5, 1.0);
  EXPECT_DOUBLE_EQ(t.probability, 0.5);
  EXPECT_NEAR(t.se, std::sqrt(0.25 / 4.0), 1e-15);
}

TEST(Mcmc, SampleDistributionFrequencies) {
  Vector w(3);
  w << 0.2, 0.3, 0.5;
  const auto s = sample_distribution(Distribution(w), 200000, 3);
  std::vector<double> count(3, 0.0);
  for (State x : s) count[x] += 1.0;
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(count[i] / 200000.0, w(i), 5e-3);
}
