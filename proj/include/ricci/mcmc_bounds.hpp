#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ricci/chain_geometry.hpp"
#include "ricci/concentration.hpp"
#include "ricci/curvature.hpp"

namespace ricci {

/// Empirical average Z = sum_{i=t0+1}^N f(X_i) / (N - t0) with X_0 ~ q.
struct McmcPlan {
  std::shared_ptr<const ChainSpec> chain;
  Distribution q;
  std::size_t N = 0;
  std::size_t t0 = 0;
  unsigned K = 1;
  double f_lip = 1.0;
  double w1_q_pi = 0.0;
};

/// Validates 0 <= t0 < N and kappa_K > 0 and computes W1(q, pi) exactly.
McmcPlan make_plan(std::shared_ptr<const ChainSpec> chain, Distribution q, std::size_t N,
                   std::size_t t0, unsigned K, double f_lip, const CurvatureProfile& profile);

/// (1 - kappa_{t0+1}) kappa_Sigma^c / (N - t0) W1(q, pi) ||f||.
double bias_bound(const McmcPlan& plan, const CurvatureProfile& profile);

/// Two-term variance bound. S defaults to the summary's S_upper.
double mcmc_variance_bound(const McmcPlan& plan, const CurvatureProfile& profile,
                           const GeometrySummary& summary, const std::optional<Vector>& S = std::nullopt);

/// Lag in [1, K] with kappa_K > 0 minimising the variance bound.
unsigned best_variance_lag(const McmcPlan& plan, const CurvatureProfile& profile,
                           const GeometrySummary& summary);

TailBound mcmc_tail_bound(const McmcPlan& plan, const CurvatureProfile& profile,
                          const GeometrySummary& summary);

TailBound mcmc_tail_bound2(const McmcPlan& plan, const CurvatureProfile& profile,
                           const GeometrySummary& summary, const std::optional<Vector>& S = std::nullopt);

// ---------------------------------------------------------------------------
// Monte Carlo harness.

struct Simulation {
  std::vector<double> Z;  // one value per replica, in replica order
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance of Z
  double se_mean = 0.0;
  double se_variance = 0.0;
};

/// Runs `replicas` independent trajectories. Replica r draws from its own
/// generator seeded by (seed, r), so results do not depend on `workers`.
Simulation simulate(const McmcPlan& plan, const Vector& f, std::size_t replicas, std::uint64_t seed,
                    unsigned workers = 1);

/// i.i.d. draws from pi, returned as state indices.
std::vector<State> sample_distribution(const Distribution& pi, std::size_t count, std::uint64_t seed);

struct EmpiricalTail {
  double t = 0.0;
  double probability = 0.0;
  double se = 0.0;
};

/// Fraction of |value - center| >= t with its binomial standard error.
EmpiricalTail empirical_tail(const std::vector<double>& values, double center, double t);

}  // namespace ricci
