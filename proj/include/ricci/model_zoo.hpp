#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ricci/dobrushin_glauber.hpp"
#include "ricci/metric_markov.hpp"

namespace ricci {

// ===========================================================================
// Split-merge walk on integer partitions

using Partition = std::vector<unsigned>;  // weakly decreasing, sums to N

inline constexpr std::size_t kMaxSplitMergeN = 30;

/// Partitions of N in reverse lexicographic order, starting with (N).
std::vector<Partition> integer_partitions(unsigned N);

std::string partition_label(const Partition& p);

/// prod_j j^{m_j} m_j!, the centralizer size; pi(lambda) = 1 / z(lambda).
std::uint64_t centralizer_size(const Partition& p);

struct PartitionSpace {
  unsigned N = 0;
  std::vector<Partition> partitions;
  std::map<Partition, std::size_t> index;
  std::shared_ptr<const FiniteMetricSpace> space;  // split/merge graph distance
};

/// Cached per N.
std::shared_ptr<const PartitionSpace> partition_space(unsigned N);

/// Transition numerators over N^2: row[y] = N^2 P(x, y), all integers.
std::map<std::size_t, std::uint64_t> split_merge_numerators(const PartitionSpace& ps, std::size_t x);

std::shared_ptr<const ChainSpec> split_merge_chain(unsigned N);

// ===========================================================================
// Glauber dynamics for binary spins

enum class Scan { kRandom, kSystemic };

/// The missing neighbour of an end site is frozen at -1, +1, or absent.
enum class Boundary { kMinus, kPlus, kFree };

inline constexpr std::size_t kMaxSpinSites = 14;
inline constexpr std::size_t kMaxSystemicSites = 12;

SpinModel curie_weiss_model(std::size_t N, double beta, double h);

/// Coupling beta per bond, so the single-site conditionals are
/// 1 / (1 + exp(-2 (beta s + h))) with s the sum of neighbouring spins.
SpinModel ising1d_model(std::size_t N, double beta, double h, Boundary boundary = Boundary::kMinus);

/// Heat-bath Glauber chain on {-1, 1}^N with the Hamming metric. State x
/// encodes site i in bit i (set = +1).
/// Transition matrix alone, without building the metric.
SparseMatrix glauber_kernel(const SpinModel& model, Scan scan);

/// exp(H) / Z over all 2^N configurations.
Vector gibbs_distribution(const SpinModel& model);

std::shared_ptr<const ChainSpec> glauber_chain(const SpinModel& model, Scan scan,
                                               std::vector<Permutation> symmetries = {});

std::shared_ptr<const ChainSpec> curie_weiss_chain(std::size_t N, double beta, double h, Scan scan);
std::shared_ptr<const ChainSpec> ising1d_chain(std::size_t N, double beta, double h, Scan scan,
                                               Boundary boundary = Boundary::kMinus);

std::string spin_label(std::uint64_t config, std::size_t N);

// ===========================================================================
// Binary cube above level R

inline constexpr std::size_t kMaxCubeN = 16;

/// States of Omega = {x : |x| >= R} as bitmasks, in increasing order.
std::vector<std::uint64_t> cube_states(std::size_t N, std::size_t R);

/// Transition matrix on cube_states(N, R), without building the metric.
SparseMatrix binary_cube_kernel(std::size_t N, std::size_t R);

std::shared_ptr<const ChainSpec> binary_cube_chain(std::size_t N, std::size_t R);

struct CubeTable {
  std::size_t N = 0;
  std::size_t R = 0;
  std::size_t K = 0;
  Matrix kappa_tilde;  // (k-1, j-R) for k = 1..K, j = R..N-1
  Matrix kappa_hat;    // same layout
  double rho = 0.0;    // 1/2 - 1/e - R/(N - 2R); NaN when N <= 2R

  double tilde(std::size_t k, std::size_t j) const;
  double hat(std::size_t k, std::size_t j) const;
  /// min_j kappa_tilde_k(j).
  double min_tilde(std::size_t k) const;
  /// First k with min_j kappa_tilde_k(j) > 0, or 0 if none within K.
  std::size_t first_positive() const;
  /// (N / rho) (1 + R / (N - 2R)); infinite when rho <= 0.
  double kappa_sigma_c_bound() const;
};

CubeTable cube_recursion(std::size_t N, std::size_t R, std::size_t K);

/// 1/2 - 1/e - R/(N - 2R).
double cube_rho(std::size_t N, std::size_t R);

// ===========================================================================
// Registry

struct ModelParam {
  std::string name;
  double default_value = 0.0;
  std::string help;
};

struct ModelInfo {
  std::string name;
  std::string description;
  std::vector<ModelParam> params;
};

const std::vector<ModelInfo>& model_list();

/// Builds a named model. Missing parameters take their defaults; unknown
/// names or parameters raise InvalidArgument. Integer parameters must be
/// integral. "scan" is 0 (random) or 1 (systemic); "boundary" is 0 (minus),
/// 1 (plus) or 2 (free).
std::shared_ptr<const ChainSpec> make_model(const std::string& name,
                                            const std::map<std::string, double>& params);

/// Two-state chain P = [[1-a, a], [b, 1-b]].
std::shared_ptr<const ChainSpec> two_state_chain(double a, double b);

}  // namespace ricci
