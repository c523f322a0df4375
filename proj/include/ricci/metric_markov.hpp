#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ricci {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using State = std::size_t;

/// Upper limit on the number of states of any dense-backed object
/// (distance matrices, dense kernel powers). Defaults to 4096.
std::size_t max_dense_states() noexcept;
void set_max_dense_states(std::size_t n) noexcept;

struct GraphEdge {
  State u = 0;
  State v = 0;
  double length = 1.0;
};

/// A finite metric space with a dense distance matrix.
///
/// Spaces built with from_graph() carry the generating edge list; their
/// distance is the shortest-path metric of that graph, which lets optimal
/// transport run on the sparse graph instead of the complete bipartite one.
class FiniteMetricSpace {
 public:
  /// Validates symmetry, zero diagonal, positive off-diagonal entries and the
  /// triangle inequality.
  FiniteMetricSpace(std::vector<std::string> labels, Matrix dist);

  static FiniteMetricSpace from_graph(std::vector<std::string> labels,
                                      std::vector<GraphEdge> edges);

  std::size_t size() const noexcept { return labels_.size(); }
  double operator()(State x, State y) const { return dist_(x, y); }
  const Matrix& distances() const noexcept { return dist_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Minimum off-diagonal distance (0 for a single point).
  double d0() const noexcept { return d0_; }
  double diam() const noexcept { return diam_; }

  bool has_graph() const noexcept { return !edges_.empty(); }
  const std::vector<GraphEdge>& graph() const noexcept { return edges_; }

 private:
  FiniteMetricSpace() = default;
  void cache_extremes();

  std::vector<std::string> labels_;
  Matrix dist_;
  std::vector<GraphEdge> edges_;
  double d0_ = 0.0;
  double diam_ = 0.0;
};

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

class Distribution {
 public:
  /// Entries must be nonnegative and sum to 1 within 1e-12.
  explicit Distribution(Vector weights);

  static Distribution dirac(std::size_t n, State x);
  static Distribution uniform(std::size_t n);

  std::size_t size() const noexcept { return static_cast<std::size_t>(w_.size()); }
  double operator[](State x) const { return w_(static_cast<Eigen::Index>(x)); }
  const Vector& weights() const noexcept { return w_; }

 private:
  Vector w_;
};

class MarkovKernel {
 public:
  /// Validates that P is square, matches the space and is row-stochastic
  /// within 1e-12.
  MarkovKernel(SpacePtr space, SparseMatrix transition);
  MarkovKernel(SpacePtr space, const Matrix& transition);

  std::size_t size() const noexcept { return space_->size(); }
  const FiniteMetricSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  const SparseMatrix& matrix() const noexcept { return p_; }
  double operator()(State x, State y) const { return p_.coeff(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)); }
  Matrix dense() const { return Matrix(p_); }

  /// row * P for a row vector stored as a column.
  Vector step(const Vector& row) const;

 private:
  SpacePtr space_;
  SparseMatrix p_;
};

/// A state permutation that preserves the metric, the kernel and the
/// stationary distribution. perm[x] is the image of x.
using Permutation = std::vector<State>;

/// Kernel plus its stationary distribution and (optionally) a set of
/// verified automorphisms used to reduce pair enumerations.
class ChainSpec {
 public:
  /// If pi is omitted it is computed with stationary(). Checks pi P = pi
  /// within 1e-10 and sets the reversible flag from detailed balance.
  explicit ChainSpec(MarkovKernel kernel, std::optional<Distribution> pi = std::nullopt,
                     std::vector<Permutation> symmetries = {});

  const MarkovKernel& kernel() const noexcept { return kernel_; }
  const FiniteMetricSpace& space() const noexcept { return kernel_.space(); }
  const Distribution& pi() const noexcept { return pi_; }
  bool reversible() const noexcept { return reversible_; }
  std::size_t size() const noexcept { return kernel_.size(); }
  const std::vector<Permutation>& symmetries() const noexcept { return symmetries_; }

 private:
  MarkovKernel kernel_;
  Distribution pi_;
  bool reversible_ = false;
  std::vector<Permutation> symmetries_;
};

/// P^k; k = 0 gives the identity kernel.
MarkovKernel k_step(const MarkovKernel& p, unsigned k);

/// Strongly connected components of the support graph that are closed
/// (no probability leaves them).
std::vector<std::vector<State>> recurrent_classes(const SparseMatrix& p);

/// Unique stationary distribution with ||pi P - pi||_1 <= tol. Throws
/// NonUniqueStationary when the chain has more than one recurrent class.
Distribution stationary(const MarkovKernel& p, double tol = 1e-12);

/// P*(x,y) = P(y,x) pi(y) / pi(x). Throws ZeroMass if some pi(x) = 0.
MarkovKernel time_reversal(const ChainSpec& chain);

struct GeodesicCheck {
  bool geodesic = true;
  std::optional<std::pair<State, State>> witness;
};

/// True iff every distance equals the shortest-path distance through links
/// of length <= eps.
GeodesicCheck check_geodesic(const FiniteMetricSpace& space, double eps);

/// L1 norm of pi P - pi.
double stationarity_residual(const MarkovKernel& p, const Vector& pi);

}  // namespace ricci
