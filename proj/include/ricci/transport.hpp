#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ricci/metric_markov.hpp"

namespace ricci {

/// Sparse probability vector: (state, mass) sorted by state.
using Measure = std::vector<std::pair<State, double>>;

Measure to_measure(const Vector& weights);
Measure to_measure(const Distribution& mu);
Measure row_measure(const SparseMatrix& p, State x);

struct CouplingEntry {
  State x = 0;
  State y = 0;
  double mass = 0.0;
};

/// A joint law stored sparsely (entries sorted by (x, y)).
struct Coupling {
  std::size_t n = 0;
  std::vector<CouplingEntry> entries;
  double cost = 0.0;

  Matrix dense() const;
  Vector first_marginal() const;
  Vector second_marginal() const;
};

/// Exact W1 via min-cost flow.
double w1(const Measure& mu, const Measure& nu, const FiniteMetricSpace& space);
double w1(const Distribution& mu, const Distribution& nu, const FiniteMetricSpace& space);

Coupling optimal_coupling(const Measure& mu, const Measure& nu, const FiniteMetricSpace& space);
Coupling optimal_coupling(const Distribution& mu, const Distribution& nu,
                          const FiniteMetricSpace& space);

double tv_distance(const Distribution& mu, const Distribution& nu);
double tv_distance(const Vector& mu, const Vector& nu);

/// max over marginal entries of |marginal - target|, for checking couplings.
double coupling_marginal_error(const Coupling& c, const Vector& mu, const Vector& nu);

}  // namespace ricci
