#pragma once

#include <random>
#include <vector>

#include "ricci/metric_markov.hpp"

// Independent oracles and generators shared by the test binaries.
namespace ricci::testkit {

/// min c.x subject to A x = b, x >= 0 (two-phase tableau simplex, Bland's rule).
double lp_min(Matrix A, Vector b, const Vector& c);

/// W1 as a dense transportation LP over the full product of supports.
double w1_lp(const Vector& mu, const Vector& nu, const Matrix& d);

/// Random metric on n points: Euclidean points, a weighted graph, or an
/// integer-valued graph metric (picked at random).
Matrix random_metric(std::mt19937_64& rng, std::size_t n);

/// Irreducible, aperiodic, generally non-reversible kernel.
Matrix random_kernel(std::mt19937_64& rng, std::size_t n);

/// Reversible kernel from a random symmetric conductance matrix.
Matrix random_reversible_kernel(std::mt19937_64& rng, std::size_t n);

ChainSpec make_chain(const Matrix& d, const Matrix& p);

/// Random probability vector with about `support` nonzero entries.
Vector random_measure(std::mt19937_64& rng, std::size_t n, std::size_t support);

/// 1-Lipschitz function min_a (v_a + d(x, a)) over random anchors, with a
/// random sign.
Vector random_lipschitz(std::mt19937_64& rng, const Matrix& d);

/// kappa_k by dense matrix powers and LP transport, all pairs.
double brute_kappa(const ChainSpec& chain, unsigned k);

}  // namespace ricci::testkit
