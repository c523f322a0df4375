#pragma once

#include <map>
#include <utility>
#include <vector>

#include "ricci/curvature.hpp"
#include "ricci/metric_markov.hpp"

namespace ricci {

struct GeometrySummary {
  Vector sigma;        // sigma(x)
  Vector sigma_hat;    // hat sigma(x)
  Vector sigma_inf;    // sigma_inf(x) = diam(supp P_x) / 2
  Vector S_upper;      // certified upper bound on sigma(x)^2 / n(x)
  Vector n_lower;      // sigma(x)^2 / S_upper(x), 1 where both vanish
  Vector ecc;          // E(x) = sum_y d(x, y) pi(y)
  std::map<unsigned, Vector> J;  // J_k(x), always contains k = 0 and 1

  double sigma_avg = 0.0;       // (E_pi sigma^2)^{1/2}
  double sigma_hat_avg = 0.0;
  double sigma_inf_max = 0.0;   // sigma_inf
  double sigma_max = 0.0;
  double sigma_hat_max = 0.0;
  double S_max = 0.0;           // sup S_upper
  double S_mean = 0.0;          // E_pi S_upper
  double S_lip = 0.0;           // Lipschitz coefficient of S_upper
  bool exact_local_dimension = false;

  const Vector& jump(unsigned k) const;
};

/// Step-size and dimension statistics. J_k is computed for k = 0, 1 and
/// every k in k_list. With exact_local_dimension, S_upper(x) is the exact
/// supremum of Var_{P_x} f over 1-Lipschitz f for supports of at most
/// kExactSupportLimit points (falls back to the surrogate beyond).
GeometrySummary geometry(const ChainSpec& chain, const std::vector<unsigned>& k_list = {},
                         bool exact_local_dimension = false);

inline constexpr std::size_t kExactSupportLimit = 8;

/// sup { Var_mu f : f 1-Lipschitz on supp mu } by vertex enumeration of the
/// Lipschitz polytope. Throws TooLarge beyond kExactSupportLimit points.
double max_lipschitz_variance(const FiniteMetricSpace& space, const Measure& mu);

/// max over x != y of |v(x) - v(y)| / d(x, y).
double lipschitz_constant(const FiniteMetricSpace& space, const Vector& v);

/// E_pi of a per-state vector.
double expectation(const Distribution& pi, const Vector& v);

// ---------------------------------------------------------------------------
// Bounds from the curvature profile.

/// inf { k <= K : 1 - kappa_k <= eps d0 / diam }; throws Unbounded if none.
unsigned mixing_time_bound(const CurvatureProfile& profile, const FiniteMetricSpace& space, double eps);

struct KappaFromMixing {
  unsigned k = 0;
  double kappa_lower = 0.0;
};

/// kappa_k >= 1 - eps diam / d0 at k = t_mix(eps / 2).
KappaFromMixing kappa_from_mixing(unsigned t_half, double eps, double d0, double diam);

struct GapBound {
  double value = 0.0;           // best bound over k
  unsigned k = 0;               // lag attaining it
  std::vector<double> per_lag;  // bound at each k (NaN where not applicable)
  std::vector<double> linear;   // weaker kappa_k / k (absolute gap only)
};

inline constexpr double kGapRootResolution = 1e-6;

/// gamma* >= max_k 1 - (1 - kappa_k)^{1/k}. Lags k > 1 with
/// 1 - kappa_k < kGapRootResolution are left out of per_lag (NaN). Throws
/// NotReversible if the chain fails detailed balance, NoPositiveKappa if no
/// kappa_k > 0.
GapBound spectral_gap_bound(const ChainSpec& chain, const CurvatureProfile& profile);

/// gamma_ps >= max_k (1 - (1 - kappa_k(P*))(1 - kappa_k)) / k.
GapBound pseudo_spectral_gap_bound(const CurvatureProfile& profile,
                                   const CurvatureProfile& reversed_profile);

struct DiameterBounds {
  unsigned k = 0;
  double kappa = 0.0;
  double diam = 0.0;            // 2 sup J_k / kappa_k
  double diam_via_J1 = 0.0;     // 2 k sup J_1 / kappa_k
  Vector ecc;                   // J_k(x) / kappa_k, bounds E(x)
  double mean_distance = 0.0;   // 2 inf J_k / kappa_k, bounds E_pi x pi d
};

/// L1 Bonnet-Myers bounds at lag k; J_k must be present in the summary.
DiameterBounds bonnet_myers(const GeometrySummary& summary, const CurvatureProfile& profile, unsigned k);

/// d(x, y) <= (J_k(x) + J_k(y)) / kappa_k(x, y) for an audited pair.
double pair_distance_bound(const GeometrySummary& summary, const CurvatureProfile& profile,
                           State x, State y, unsigned k);

}  // namespace ricci
