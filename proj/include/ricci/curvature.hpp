#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ricci/metric_markov.hpp"
#include "ricci/symmetry.hpp"
#include "ricci/transport.hpp"

namespace ricci {

/// Which pairs enter the infimum. Geodesic mode restricts to pairs at
/// distance <= eps and requires the space to be eps-geodesic.
struct PairSelection {
  enum class Mode { kAllPairs, kGeodesic };
  Mode mode = Mode::kAllPairs;
  double eps = 0.0;

  static PairSelection all() { return {}; }
  static PairSelection geodesic(double eps) { return {Mode::kGeodesic, eps}; }
};

/// kappa_k(x, y) = 1 - W1(P^k_x, P^k_y) / d(x, y). Returns 1 for x == y and
/// sets *same_pair.
double kappa_pair(const ChainSpec& chain, State x, State y, unsigned k, bool* same_pair = nullptr);

struct CurvatureProfile {
  std::vector<double> kappa;                 // kappa_0 .. kappa_K
  std::vector<double> running_sigma_c;       // sum_{i<=k} (1 - kappa_i)
  double M = 1.0;                            // sup_{k<=K} (1 - kappa_k)
  PairSelection selection;
  std::vector<StatePair> argmin;             // minimising pair per k

  // Per-pair detail. pairs are sorted; values are stored per orbit.
  PairOrbits orbits;
  Matrix orbit_kappa;                        // orbit x (K + 1)

  double max_submultiplicativity_violation = 0.0;

  unsigned K() const { return kappa.empty() ? 0U : static_cast<unsigned>(kappa.size() - 1); }
  double one_minus(unsigned k) const { return 1.0 - kappa.at(k); }
  bool has_pairs() const { return !orbits.pairs.empty(); }
  std::optional<std::size_t> pair_index(State x, State y) const;
  double pair_kappa(std::size_t pair_index, unsigned k) const;
};

/// Exact profile kappa_0..kappa_K. Pairs are reduced to orbits under the
/// chain's symmetries; rows of P^k are propagated incrementally.
CurvatureProfile curvature_profile(const ChainSpec& chain, unsigned K,
                                   PairSelection selection = PairSelection::all());

/// Profile from given values (closed forms, bounds from other modules).
CurvatureProfile profile_from_values(std::vector<double> kappa);

double kappa_k(const ChainSpec& chain, unsigned k, PairSelection selection = PairSelection::all());

/// max over k + l <= K of (1 - kappa_{k+l}) - (1 - kappa_k)(1 - kappa_l).
double submultiplicativity_violation(const std::vector<double>& kappa);

/// min(sum_{i<k}(1 - kappa_i), k M) / kappa_k.
double kappa_sigma_c_bound(const CurvatureProfile& profile, unsigned k);

// ---------------------------------------------------------------------------
// Infinite series over 1 - kappa_i, closed beyond the horizon with the
// submultiplicative tail 1 - kappa_i <= (1 - kappa_k)^{floor(i/k)} (1 - kappa_{i mod k}).

/// Certified upper bound on 1 - kappa_i for any i >= 0.
double one_minus_kappa_bound(const CurvatureProfile& profile, unsigned long long i);

/// Index k maximising the geometric decay rate, or nullopt if no kappa_k > 0.
std::optional<unsigned> best_decay_lag(const CurvatureProfile& profile);

/// sum_{i>=0} (1 - kappa_i).
double kappa_sigma_c(const CurvatureProfile& profile);
/// sum_{i>=0} (1 - kappa_i)^2.
double sum_squares(const CurvatureProfile& profile);
/// sum_{i>=0} exp(c (1 - kappa_i)) (1 - kappa_i)^2 for c >= 0.
double exp_weighted_squares(const CurvatureProfile& profile, double c);

/// Upper bound on kappa_Sigma^c(x, y) = sum_i (1 - kappa_i(x, y)) for an
/// audited pair, using 1 - kappa_{K+j}(x,y) <= (1 - kappa_j)(1 - kappa_K(x,y)).
double pair_kappa_sigma_c(const CurvatureProfile& profile, std::size_t pair_index);

// ---------------------------------------------------------------------------
// Recursive lower bound.

struct PairCouplingFamily {
  std::vector<StatePair> pairs;  // first < second
  std::vector<Coupling> couplings;

  std::optional<std::size_t> find(State x, State y) const;
};

/// Optimal couplings of P_x, P_y for the given pairs.
PairCouplingFamily optimal_coupling_family(const ChainSpec& chain, std::vector<StatePair> pairs);

/// Smallest pair set containing `seed` and closed under the supports of the
/// optimal couplings of its members.
std::vector<StatePair> close_pair_set(const ChainSpec& chain, std::vector<StatePair> seed);

struct RecursiveBound {
  std::vector<StatePair> pairs;
  Matrix lower;  // pair x K, column k-1 bounds kappa_k

  double min_at(unsigned k) const;
};

/// lb_1 = floor; lb_{k+1}(x,y) = c + sum_{X != Y} g(X,Y) d(X,Y)/d(x,y) lb_k(X,Y)
/// where c = 1 - E_g d / d(x,y).
RecursiveBound recursive_lower_bound(const ChainSpec& chain, const PairCouplingFamily& couplings,
                                     const std::vector<double>& kappa1_floor, unsigned K);

}  // namespace ricci
