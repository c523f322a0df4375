#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ricci/metric_markov.hpp"

namespace ricci {

using StatePair = std::pair<State, State>;

/// Throws InvalidChain unless perm is a bijection preserving d, P and pi
/// (each within 1e-12).
void verify_automorphism(const MarkovKernel& p, const Distribution& pi, const Permutation& perm);

/// Orbits of unordered state pairs under the group generated by `gens`.
///
/// `pairs` must be closed under the generators (e.g. all pairs, or all pairs
/// at distance <= eps); pairs are stored with first < second.
struct PairOrbits {
  std::vector<StatePair> pairs;
  std::vector<std::size_t> orbit_of;        // pair index -> orbit index
  std::vector<std::size_t> representative;  // orbit index -> pair index
};

PairOrbits pair_orbits(std::vector<StatePair> pairs, const std::vector<Permutation>& gens);

/// Orbit index of each state under the generated group, plus one
/// representative state per orbit.
struct StateOrbits {
  std::vector<std::size_t> orbit_of;
  std::vector<State> representative;
};

StateOrbits state_orbits(std::size_t n, const std::vector<Permutation>& gens);

/// All pairs x < y, or only those with d(x,y) <= eps when eps > 0.
std::vector<StatePair> enumerate_pairs(const FiniteMetricSpace& space, double eps = 0.0);

}  // namespace ricci
