#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ricci/chain_geometry.hpp"
#include "ricci/error.hpp"
#include "ricci/model_zoo.hpp"
#include "ricci/oracle_bench.hpp"
#include "support.hpp"

using namespace ricci;

TEST(Geometry, TwoStateStatistics) {
  const auto chain = two_state_chain(0.25, 0.25);
  const auto g = geometry(*chain, {2, 3});
  // P_x = (3/4, 1/4): sigma^2 = 3/16, hat sigma^2 = 1/4, sigma_inf = 1/2.
  EXPECT_NEAR(g.sigma(0), std::sqrt(3.0 / 16.0), 1e-15);
  EXPECT_NEAR(g.sigma_hat(0), 0.5, 1e-15);
  EXPECT_NEAR(g.sigma_inf(1), 0.5, 1e-15);
  EXPECT_NEAR(g.S_upper(0), 3.0 / 16.0, 1e-15);
  EXPECT_NEAR(g.ecc(0), 0.5, 1e-15);
  // J_k(x) = P^k(x, other) = (1 - 2^{-k}) / 2
  EXPECT_NEAR(g.jump(1)(0), 0.25, 1e-15);
  EXPECT_NEAR(g.jump(2)(0), 0.375, 1e-15);
  EXPECT_NEAR(g.jump(3)(1), 0.4375, 1e-15);
  EXPECT_NEAR(g.jump(0)(1), 0.0, 0.0);
}

TEST(Geometry, LocalDimensionAtLeastOne) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 8;
    const ChainSpec chain = testkit::make_chain(testkit::random_metric(rng, n), testkit::random_kernel(rng, n));
    const auto g = geometry(chain, {}, true);
    for (Eigen::Index x = 0; x < g.sigma.size(); ++x) {
      EXPECT_GE(g.n_lower(x), 1.0);
      EXPECT_LE(g.S_upper(x), g.sigma(x) * g.sigma(x) + 1e-15);
    }
  }
}

TEST(Geometry, ExactLipschitzVarianceDominatesSampledFunctions) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + trial % 5;
    const Matrix d = testkit::random_metric(rng, n);
    std::vector<std::string> labels(n, "x");
    for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
    const FiniteMetricSpace s(labels, d);
    const Vector mu = testkit::random_measure(rng, n, n);
    const double sup = max_lipschitz_variance(s, to_measure(mu));
    for (int f_trial = 0; f_trial < 20; ++f_trial) {
      const Vector f = testkit::random_lipschitz(rng, d);
      EXPECT_LE(exact_variance(mu, f), sup + 1e-12);
    }
  }
}

TEST(Geometry, MixingBoundDominatesExactMixing) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const ChainSpec chain = testkit::make_chain(testkit::random_metric(rng, n), testkit::random_kernel(rng, n));
    const auto prof = curvature_profile(chain, 80);
    const auto exact = exact_mixing(chain, {0.25, 0.125});
    for (const auto& m : exact) {
      try {
        EXPECT_GE(mixing_time_bound(prof, chain.space(), m.eps), m.t);
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kUnbounded);
      }
    }
  }
}

TEST(Geometry, SpectralGapBoundBelowOracle) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 12;
    const ChainSpec chain =
        testkit::make_chain(testkit::random_metric(rng, n), testkit::random_reversible_kernel(rng, n));
    ASSERT_TRUE(chain.reversible());
    const auto prof = curvature_profile(chain, 10);
    const auto oracle = exact_gaps(chain, 0);
    try {
      const auto b = spectral_gap_bound(chain, prof);
      for (unsigned k = 1; k <= 10; ++k) {
        if (std::isnan(b.per_lag[k])) continue;
        EXPECT_LE(b.per_lag[k], oracle.gamma_star + 1e-9);
        EXPECT_LE(b.linear[k], b.per_lag[k] + 1e-15);
      }
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kNoPositiveKappa);
    }
  }
}

TEST(Geometry, PseudoGapBoundBelowOracle) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 2 + trial % 8;
    const ChainSpec chain = testkit::make_chain(testkit::random_metric(rng, n), testkit::random_kernel(rng, n));
    const ChainSpec rev(time_reversal(chain), chain.pi());
    const auto prof = curvature_profile(chain, 4);
    const auto rprof = curvature_profile(rev, 4);
    const auto oracle = exact_gaps(chain, 4);
    try {
      const auto b = pseudo_spectral_gap_bound(prof, rprof);
      for (unsigned k = 1; k <= 4; ++k) {
        if (!std::isnan(b.per_lag[k])) EXPECT_LE(b.per_lag[k], oracle.gamma_ps_by_k[k - 1] + 1e-9);
      }
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kNoPositiveKappa);
    }
  }
}

TEST(Geometry, NotReversible) {
  std::mt19937_64 rng(26);
  const ChainSpec chain = testkit::make_chain(testkit::random_metric(rng, 5), testkit::random_kernel(rng, 5));
  ASSERT_FALSE(chain.reversible());
  try {
    spectral_gap_bound(chain, curvature_profile(chain, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotReversible);
  }
}

TEST(Geometry, BonnetMyers) {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const ChainSpec chain = testkit::make_chain(testkit::random_metric(rng, n), testkit::random_kernel(rng, n));
    const auto prof = curvature_profile(chain, 6);
    const auto g = geometry(chain, {2, 3, 4, 5, 6});
    const Vector& pi = chain.pi().weights();
    const double mean = pi.dot(chain.space().distances() * pi);
    for (unsigned k = 1; k <= 6; ++k) {
      if (!(prof.kappa[k] > 0.0)) continue;
      const auto b = bonnet_myers(g, prof, k);
      EXPECT_GE(b.diam + 1e-12, chain.space().diam());
      EXPECT_GE(b.diam_via_J1 + 1e-12, chain.space().diam());
      EXPECT_GE(b.mean_distance + 1e-12, mean);
      for (Eigen::Index x = 0; x < g.ecc.size(); ++x) EXPECT_GE(b.ecc(x) + 1e-12, g.ecc(x));
      for (std::size_t i = 0; i < prof.orbits.pairs.size(); ++i) {
        const auto [x, y] = prof.orbits.pairs[i];
        if (prof.pair_kappa(i, k) > 0.0) {
          EXPECT_GE(pair_distance_bound(g, prof, x, y, k) + 1e-12, chain.space()(x, y));
        }
      }
    }
  }
}

TEST(Geometry, KappaFromMixing) {
  const auto chain = two_state_chain(0.25, 0.25);
  const auto exact = exact_mixing(*chain, {0.125});
  const auto kf = kappa_from_mixing(static_cast<unsigned>(exact[0].t), 0.25, 1.0, 1.0);
  EXPECT_LE(kf.kappa_lower, kappa_k(*chain, kf.k) + 1e-9);
}
