#include <gtest/gtest.h>

#include <random>

#include "ricci/transport.hpp"
#include "support.hpp"

using namespace ricci;

namespace {

FiniteMetricSpace space_of(const Matrix& d) {
  std::vector<std::string> labels;
  for (Eigen::Index i = 0; i < d.rows(); ++i) labels.push_back(std::to_string(i));
  return FiniteMetricSpace(labels, d);
}

}  // namespace

TEST(Transport, DiracMassesCostTheirDistance) {
  std::mt19937_64 rng(1);
  const FiniteMetricSpace s = space_of(testkit::random_metric(rng, 6));
  for (State x = 0; x < 6; ++x) {
    for (State y = 0; y < 6; ++y) {
      EXPECT_NEAR(w1(Distribution::dirac(6, x), Distribution::dirac(6, y), s), s(x, y), 1e-14);
    }
  }
}

TEST(Transport, MatchesLinearProgram) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const Matrix d = testkit::random_metric(rng, n);
    const FiniteMetricSpace s = space_of(d);
    const Vector mu = testkit::random_measure(rng, n, 1 + trial % n);
    const Vector nu = testkit::random_measure(rng, n, 1 + (trial / 3) % n);
    EXPECT_NEAR(w1(Distribution(mu), Distribution(nu), s), testkit::w1_lp(mu, nu, d), 1e-9) << "trial " << trial;
  }
}

TEST(Transport, CouplingHasTheRightMarginals) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + trial % 6;
    const FiniteMetricSpace s = space_of(testkit::random_metric(rng, n));
    const Vector mu = testkit::random_measure(rng, n, n);
    const Vector nu = testkit::random_measure(rng, n, 2);
    const Coupling c = optimal_coupling(Distribution(mu), Distribution(nu), s);
    EXPECT_LT(coupling_marginal_error(c, mu, nu), 1e-12);
    double cost = 0.0;
    for (const auto& e : c.entries) {
      EXPECT_GE(e.mass, 0.0);
      cost += e.mass * s(e.x, e.y);
    }
    EXPECT_NEAR(cost, c.cost, 1e-12);
    EXPECT_NEAR(cost, w1(Distribution(mu), Distribution(nu), s), 1e-12);
  }
}

TEST(Transport, GraphModeAgreesWithDense) {
  // A 4-cycle as a graph-backed space and as a plain matrix.
  std::vector<std::string> labels = {"a", "b", "c", "d"};
  const auto g = FiniteMetricSpace::from_graph(labels, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}});
  const FiniteMetricSpace dense(labels, g.distances());
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const Distribution mu(testkit::random_measure(rng, 4, 3));
    const Distribution nu(testkit::random_measure(rng, 4, 2));
    EXPECT_NEAR(w1(mu, nu, g), w1(mu, nu, dense), 1e-12);
  }
}

TEST(Transport, IsAMetricOnMeasures) {
  std::mt19937_64 rng(5);
  const Matrix d = testkit::random_metric(rng, 7);
  const FiniteMetricSpace s = space_of(d);
  for (int trial = 0; trial < 30; ++trial) {
    const Distribution a(testkit::random_measure(rng, 7, 4));
    const Distribution b(testkit::random_measure(rng, 7, 4));
    const Distribution c(testkit::random_measure(rng, 7, 4));
    EXPECT_NEAR(w1(a, b, s), w1(b, a, s), 1e-12);
    EXPECT_LE(w1(a, c, s), w1(a, b, s) + w1(b, c, s) + 1e-12);
    EXPECT_NEAR(w1(a, a, s), 0.0, 1e-14);
    // d0 * TV <= W1 <= diam * TV
    EXPECT_GE(w1(a, b, s) + 1e-12, s.d0() * tv_distance(a, b));
    EXPECT_LE(w1(a, b, s), s.diam() * tv_distance(a, b) + 1e-12);
  }
}

TEST(Transport, TotalVariation) {
  Vector a(3), b(3);
  a << 0.5, 0.5, 0.0;
  b << 0.0, 0.5, 0.5;
  EXPECT_DOUBLE_EQ(tv_distance(a, b), 0.5);
}

TEST(Transport, LinearProgramOracleSanity) {
  // min x1 + 2 x2 s.t. x1 + x2 = 1
  Matrix A(1, 2);
  A << 1, 1;
  Vector b(1);
  b << 1;
  Vector c(2);
  c << 1, 2;
  EXPECT_NEAR(testkit::lp_min(A, b, c), 1.0, 1e-14);
}
