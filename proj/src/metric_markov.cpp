#include "ricci/metric_markov.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "ricci/error.hpp"
#include "ricci/symmetry.hpp"

namespace ricci {

namespace {

std::atomic<std::size_t> g_max_dense_states{4096};

constexpr double kRowSumTol = 1e-12;
constexpr double kStationaryTol = 1e-10;
constexpr double kBalanceTol = 1e-10;

void check_dense_budget(std::size_t n, const char* what) {
  if (n > max_dense_states()) {
    std::ostringstream os;
    os << what << ": " << n << " states exceeds the dense budget of " << max_dense_states();
    fail(ErrorCode::kTooLarge, os.str());
  }
}

// Single-source shortest paths over an adjacency list.
void dijkstra(const std::vector<std::vector<std::pair<State, double>>>& adj, State src,
              std::vector<double>& dist) {
  const double inf = std::numeric_limits<double>::infinity();
  std::fill(dist.begin(), dist.end(), inf);
  using Item = std::pair<double, State>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[src] = 0.0;
  pq.emplace(0.0, src);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (auto [v, w] : adj[u]) {
      const double nd = d + w;
      if (nd < dist[v]) {
        dist[v] = nd;
        pq.emplace(nd, v);
      }
    }
  }
}

}  // namespace

std::size_t max_dense_states() noexcept { return g_max_dense_states.load(); }
void set_max_dense_states(std::size_t n) noexcept { g_max_dense_states.store(n); }

// ---------------------------------------------------------------------------
// FiniteMetricSpace

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels, Matrix dist)
    : labels_(std::move(labels)), dist_(std::move(dist)) {
  const auto n = static_cast<Eigen::Index>(labels_.size());
  if (dist_.rows() != n || dist_.cols() != n) {
    fail(ErrorCode::kInvalidChain, "distance matrix shape does not match the label count");
  }
  check_dense_budget(labels_.size(), "metric space");
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = dist_(i, j);
      if (!std::isfinite(d)) {
        fail(ErrorCode::kInvalidChain, "distance matrix has a non-finite entry");
      }
      if (i == j && d != 0.0) {
        fail(ErrorCode::kInvalidChain, "distance matrix has a nonzero diagonal entry at " +
                                           std::to_string(i));
      }
      if (i != j && !(d > 0.0)) {
        fail(ErrorCode::kInvalidChain, "distinct states " + std::to_string(i) + " and " +
                                           std::to_string(j) + " are at distance 0");
      }
      if (d != dist_(j, i)) {
        fail(ErrorCode::kInvalidChain, "distance matrix is not symmetric");
      }
    }
  }
  cache_extremes();
  const double tol = 1e-12 * std::max(1.0, diam_);
  for (Eigen::Index y = 0; y < n; ++y) {
    for (Eigen::Index x = 0; x < n; ++x) {
      const double dxy = dist_(x, y);
      for (Eigen::Index z = 0; z < n; ++z) {
        if (dist_(x, z) > dxy + dist_(y, z) + tol) {
          std::ostringstream os;
          os << "triangle inequality fails for (" << x << ", " << y << ", " << z << ")";
          fail(ErrorCode::kInvalidChain, os.str());
        }
      }
    }
  }
}

FiniteMetricSpace FiniteMetricSpace::from_graph(std::vector<std::string> labels,
                                                std::vector<GraphEdge> edges) {
  const std::size_t n = labels.size();
  check_dense_budget(n, "metric space");
  std::vector<std::vector<std::pair<State, double>>> adj(n);
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n || e.u == e.v || !(e.length > 0.0) || !std::isfinite(e.length)) {
      fail(ErrorCode::kInvalidChain, "invalid graph edge");
    }
    adj[e.u].emplace_back(e.v, e.length);
    adj[e.v].emplace_back(e.u, e.length);
  }
  FiniteMetricSpace space;
  space.labels_ = std::move(labels);
  space.dist_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<double> dist(n);
  for (State s = 0; s < n; ++s) {
    dijkstra(adj, s, dist);
    for (State t = 0; t < n; ++t) {
      if (!std::isfinite(dist[t])) {
        fail(ErrorCode::kInvalidChain, "graph is not connected");
      }
      space.dist_(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) = dist[t];
    }
  }
  // Dijkstra sums in different orders per source; force exact symmetry.
  for (Eigen::Index i = 0; i < space.dist_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < space.dist_.cols(); ++j) {
      const double d = std::min(space.dist_(i, j), space.dist_(j, i));
      space.dist_(i, j) = space.dist_(j, i) = d;
    }
  }
  space.edges_ = std::move(edges);
  space.cache_extremes();
  return space;
}

void FiniteMetricSpace::cache_extremes() {
  const auto n = dist_.rows();
  d0_ = 0.0;
  diam_ = 0.0;
  if (n < 2) return;
  d0_ = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d0_ = std::min(d0_, dist_(i, j));
      diam_ = std::max(diam_, dist_(i, j));
    }
  }
}

// ---------------------------------------------------------------------------
// Distribution

Distribution::Distribution(Vector weights) : w_(std::move(weights)) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < w_.size(); ++i) {
    if (!std::isfinite(w_(i)) || w_(i) < 0.0) {
      fail(ErrorCode::kInvalidArgument, "distribution has a negative or non-finite entry at " +
                                            std::to_string(i));
    }
    sum += w_(i);
  }
  if (std::abs(sum - 1.0) > 1e-12 * std::max<double>(1.0, static_cast<double>(w_.size()) / 64.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "distribution sums to " << sum << ", not 1";
    fail(ErrorCode::kInvalidArgument, os.str());
  }
}

Distribution Distribution::dirac(std::size_t n, State x) {
  Vector w = Vector::Zero(static_cast<Eigen::Index>(n));
  w(static_cast<Eigen::Index>(x)) = 1.0;
  return Distribution(std::move(w));
}

Distribution Distribution::uniform(std::size_t n) {
  return Distribution(Vector::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n)));
}

// ---------------------------------------------------------------------------
// MarkovKernel

MarkovKernel::MarkovKernel(SpacePtr space, SparseMatrix transition)
    : space_(std::move(space)), p_(std::move(transition)) {
  if (!space_) fail(ErrorCode::kInvalidArgument, "kernel needs a metric space");
  const auto n = static_cast<Eigen::Index>(space_->size());
  if (p_.rows() != n || p_.cols() != n) {
    fail(ErrorCode::kInvalidChain, "transition matrix shape does not match the space");
  }
  p_.prune(0.0);
  p_.makeCompressed();
  for (Eigen::Index r = 0; r < n; ++r) {
    double sum = 0.0;
    for (SparseMatrix::InnerIterator it(p_, r); it; ++it) {
      const double v = it.value();
      if (!std::isfinite(v) || v < 0.0 || v > 1.0 + kRowSumTol) {
        fail(ErrorCode::kInvalidChain, "transition row " + std::to_string(r) +
                                           " has an entry outside [0, 1]");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTol) {
      std::ostringstream os;
      os.precision(17);
      os << "transition row " << r << " sums to " << sum << ", not 1";
      fail(ErrorCode::kInvalidChain, os.str());
    }
  }
}

MarkovKernel::MarkovKernel(SpacePtr space, const Matrix& transition)
    : MarkovKernel(std::move(space), SparseMatrix(transition.sparseView())) {}

Vector MarkovKernel::step(const Vector& row) const {
  return (row.transpose() * p_).transpose();
}

// ---------------------------------------------------------------------------
// ChainSpec

ChainSpec::ChainSpec(MarkovKernel kernel, std::optional<Distribution> pi,
                     std::vector<Permutation> symmetries)
    : kernel_(std::move(kernel)),
      pi_(pi ? std::move(*pi) : stationary(kernel_)),
      symmetries_(std::move(symmetries)) {
  if (pi_.size() != kernel_.size()) {
    fail(ErrorCode::kInvalidChain, "stationary distribution has the wrong length");
  }
  const double residual = stationarity_residual(kernel_, pi_.weights());
  if (residual > kStationaryTol) {
    std::ostringstream os;
    os << "declared distribution is not stationary: ||pi P - pi||_1 = " << residual;
    fail(ErrorCode::kInvalidChain, os.str());
  }
  reversible_ = true;
  const auto& p = kernel_.matrix();
  const Vector& w = pi_.weights();
  for (Eigen::Index x = 0; x < p.outerSize() && reversible_; ++x) {
    for (SparseMatrix::InnerIterator it(p, x); it; ++it) {
      const Eigen::Index y = it.col();
      if (std::abs(w(x) * it.value() - w(y) * p.coeff(y, x)) > kBalanceTol) {
        reversible_ = false;
        break;
      }
    }
  }
  for (const auto& g : symmetries_) verify_automorphism(kernel_, pi_, g);
}

// ---------------------------------------------------------------------------
// Operations

MarkovKernel k_step(const MarkovKernel& p, unsigned k) {
  const auto n = static_cast<Eigen::Index>(p.size());
  SparseMatrix result(n, n);
  result.setIdentity();
  SparseMatrix base = p.matrix();
  // binary powering keeps the product count logarithmic in k
  while (k > 0) {
    if (k & 1U) result = SparseMatrix(result * base);
    k >>= 1U;
    if (k > 0) base = SparseMatrix(base * base);
  }
  // renormalise away accumulated rounding in the row sums
  for (Eigen::Index r = 0; r < n; ++r) {
    double sum = 0.0;
    for (SparseMatrix::InnerIterator it(result, r); it; ++it) sum += it.value();
    for (SparseMatrix::InnerIterator it(result, r); it; ++it) it.valueRef() /= sum;
  }
  return MarkovKernel(p.space_ptr(), std::move(result));
}

std::vector<std::vector<State>> recurrent_classes(const SparseMatrix& p) {
  const auto n = static_cast<std::size_t>(p.rows());
  // Iterative Tarjan.
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<State> stack;
  std::vector<std::pair<State, Eigen::Index>> call;  // (node, next inner position)
  int counter = 0;
  int ncomp = 0;
  for (State root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.emplace_back(root, p.outerIndexPtr()[root]);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [u, pos] = call.back();
      const Eigen::Index end = p.outerIndexPtr()[u + 1];
      bool descended = false;
      while (pos < end) {
        const auto v = static_cast<State>(p.innerIndexPtr()[pos]);
        ++pos;
        if (index[v] < 0) {
          index[v] = low[v] = counter++;
          stack.push_back(v);
          on_stack[v] = 1;
          call.emplace_back(v, p.outerIndexPtr()[v]);
          descended = true;
          break;
        }
        if (on_stack[v]) low[u] = std::min(low[u], index[v]);
      }
      if (descended) continue;
      const State done = u;
      if (low[done] == index[done]) {
        State w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = ncomp;
        } while (w != done);
        ++ncomp;
      }
      call.pop_back();
      if (!call.empty()) {
        const State parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }
  std::vector<char> closed(static_cast<std::size_t>(ncomp), 1);
  for (State u = 0; u < n; ++u) {
    for (SparseMatrix::InnerIterator it(p, static_cast<Eigen::Index>(u)); it; ++it) {
      if (comp[static_cast<State>(it.col())] != comp[u]) closed[static_cast<std::size_t>(comp[u])] = 0;
    }
  }
  std::vector<std::vector<State>> classes;
  std::vector<int> slot(static_cast<std::size_t>(ncomp), -1);
  for (State u = 0; u < n; ++u) {
    const auto c = static_cast<std::size_t>(comp[u]);
    if (!closed[c]) continue;
    if (slot[c] < 0) {
      slot[c] = static_cast<int>(classes.size());
      classes.emplace_back();
    }
    classes[static_cast<std::size_t>(slot[c])].push_back(u);
  }
  return classes;
}

double stationarity_residual(const MarkovKernel& p, const Vector& pi) {
  return (p.step(pi) - pi).lpNorm<1>();
}

Distribution stationary(const MarkovKernel& p, double tol) {
  const auto classes = recurrent_classes(p.matrix());
  if (classes.size() != 1) {
    fail(ErrorCode::kNonUniqueStationary,
         "chain has " + std::to_string(classes.size()) + " recurrent classes");
  }
  const auto n = static_cast<Eigen::Index>(p.size());
  Vector pi;
  if (n <= 2000) {
    Matrix a = Matrix(p.matrix()).transpose() - Matrix::Identity(n, n);
    a.row(n - 1).setOnes();
    Vector rhs = Vector::Zero(n);
    rhs(n - 1) = 1.0;
    Eigen::PartialPivLU<Matrix> lu(a);
    pi = lu.solve(rhs);
    // one round of iterative refinement
    pi += lu.solve(rhs - a * pi);
  } else {
    pi = Vector::Constant(n, 1.0 / static_cast<double>(n));
    for (int it = 0; it < 1000000; ++it) {
      Vector next = 0.5 * (pi + p.step(pi));
      next /= next.sum();
      const bool done = (next - pi).lpNorm<1>() <= 0.1 * tol;
      pi = std::move(next);
      if (done) break;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) pi(i) = std::max(pi(i), 0.0);
  pi /= pi.sum();
  const double residual = stationarity_residual(p, pi);
  if (residual > tol) {
    std::ostringstream os;
    os << "stationary solve residual " << residual << " exceeds " << tol;
    fail(ErrorCode::kInvalidChain, os.str());
  }
  return Distribution(std::move(pi));
}

MarkovKernel time_reversal(const ChainSpec& chain) {
  const Vector& w = chain.pi().weights();
  for (Eigen::Index x = 0; x < w.size(); ++x) {
    if (!(w(x) > 0.0)) {
      fail(ErrorCode::kZeroMass, "stationary mass of state " + std::to_string(x) + " is zero");
    }
  }
  const auto& p = chain.kernel().matrix();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(p.nonZeros()));
  for (Eigen::Index y = 0; y < p.outerSize(); ++y) {
    for (SparseMatrix::InnerIterator it(p, y); it; ++it) {
      const Eigen::Index x = it.col();
      trips.emplace_back(x, y, it.value() * w(y) / w(x));
    }
  }
  SparseMatrix ps(p.rows(), p.cols());
  ps.setFromTriplets(trips.begin(), trips.end());
  // Row sums equal 1 only up to the stationarity residual; renormalise.
  for (Eigen::Index r = 0; r < ps.outerSize(); ++r) {
    double sum = 0.0;
    for (SparseMatrix::InnerIterator it(ps, r); it; ++it) sum += it.value();
    for (SparseMatrix::InnerIterator it(ps, r); it; ++it) it.valueRef() /= sum;
  }
  return MarkovKernel(chain.kernel().space_ptr(), std::move(ps));
}

GeodesicCheck check_geodesic(const FiniteMetricSpace& space, double eps) {
  if (!(eps > 0.0)) fail(ErrorCode::kInvalidArgument, "geodesic eps must be positive");
  const std::size_t n = space.size();
  const Matrix& d = space.distances();
  std::vector<std::vector<std::pair<State, double>>> adj(n);
  for (State x = 0; x < n; ++x) {
    for (State y = 0; y < n; ++y) {
      const double w = d(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
      if (x != y && w <= eps) adj[x].emplace_back(y, w);
    }
  }
  const double tol = 1e-12 * std::max(1.0, space.diam());
  std::vector<double> sp(n);
  for (State x = 0; x < n; ++x) {
    dijkstra(adj, x, sp);
    for (State y = x + 1; y < n; ++y) {
      if (std::abs(sp[y] - d(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y))) > tol) {
        return GeodesicCheck{false, std::make_pair(x, y)};
      }
    }
  }
  return GeodesicCheck{};
}

}  // namespace ricci
