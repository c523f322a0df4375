#include "ricci/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_map>

#include "ricci/error.hpp"

namespace ricci {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }

  // The smaller index always becomes the root so representatives are the
  // first member of each orbit in enumeration order.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::uint64_t pair_key(State x, State y) {
  if (y < x) std::swap(x, y);
  return (static_cast<std::uint64_t>(x) << 32) | static_cast<std::uint64_t>(y);
}

}  // namespace

void verify_automorphism(const MarkovKernel& p, const Distribution& pi, const Permutation& perm) {
  const std::size_t n = p.size();
  if (perm.size() != n) fail(ErrorCode::kInvalidChain, "symmetry has the wrong length");
  std::vector<char> seen(n, 0);
  for (State x : perm) {
    if (x >= n || seen[x]) fail(ErrorCode::kInvalidChain, "symmetry is not a permutation");
    seen[x] = 1;
  }
  const auto& space = p.space();
  constexpr double tol = 1e-12;
  for (State x = 0; x < n; ++x) {
    if (std::abs(pi[x] - pi[perm[x]]) > tol) {
      fail(ErrorCode::kInvalidChain, "symmetry does not preserve the stationary distribution");
    }
    for (State y = x + 1; y < n; ++y) {
      if (std::abs(space(x, y) - space(perm[x], perm[y])) > tol * std::max(1.0, space.diam())) {
        fail(ErrorCode::kInvalidChain, "symmetry does not preserve the metric");
      }
    }
  }
  const auto& m = p.matrix();
  for (Eigen::Index x = 0; x < m.outerSize(); ++x) {
    std::size_t count = 0;
    for (SparseMatrix::InnerIterator it(m, x); it; ++it) {
      ++count;
      const double img = p(perm[static_cast<State>(x)], perm[static_cast<State>(it.col())]);
      if (std::abs(img - it.value()) > tol) {
        fail(ErrorCode::kInvalidChain, "symmetry does not preserve the kernel");
      }
    }
    // equal support sizes rule out extra mass in the image row
    const auto gx = static_cast<Eigen::Index>(perm[static_cast<State>(x)]);
    const auto image_count =
        static_cast<std::size_t>(m.outerIndexPtr()[gx + 1] - m.outerIndexPtr()[gx]);
    if (image_count != count) {
      fail(ErrorCode::kInvalidChain, "symmetry does not preserve the kernel support");
    }
  }
}

PairOrbits pair_orbits(std::vector<StatePair> pairs, const std::vector<Permutation>& gens) {
  PairOrbits out;
  for (auto& [x, y] : pairs) {
    if (y < x) std::swap(x, y);
  }
  std::unordered_map<std::uint64_t, std::size_t> index;
  index.reserve(pairs.size() * 2);
  for (std::size_t i = 0; i < pairs.size(); ++i) index.emplace(pair_key(pairs[i].first, pairs[i].second), i);
  DisjointSets sets(pairs.size());
  for (const auto& g : gens) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto it = index.find(pair_key(g[pairs[i].first], g[pairs[i].second]));
      if (it == index.end()) {
        fail(ErrorCode::kInvalidArgument, "pair set is not closed under the symmetries");
      }
      sets.unite(i, it->second);
    }
  }
  out.orbit_of.resize(pairs.size());
  std::unordered_map<std::size_t, std::size_t> orbit_index;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::size_t root = sets.find(i);
    auto [it, inserted] = orbit_index.emplace(root, out.representative.size());
    if (inserted) out.representative.push_back(root);
    out.orbit_of[i] = it->second;
  }
  out.pairs = std::move(pairs);
  return out;
}

StateOrbits state_orbits(std::size_t n, const std::vector<Permutation>& gens) {
  DisjointSets sets(n);
  for (const auto& g : gens) {
    for (State x = 0; x < n; ++x) sets.unite(x, g[x]);
  }
  StateOrbits out;
  out.orbit_of.resize(n);
  std::vector<std::size_t> slot(n, n);
  for (State x = 0; x < n; ++x) {
    const std::size_t root = sets.find(x);
    if (slot[root] == n) {
      slot[root] = out.representative.size();
      out.representative.push_back(root);
    }
    out.orbit_of[x] = slot[root];
  }
  return out;
}

std::vector<StatePair> enumerate_pairs(const FiniteMetricSpace& space, double eps) {
  std::vector<StatePair> pairs;
  const std::size_t n = space.size();
  for (State x = 0; x < n; ++x) {
    for (State y = x + 1; y < n; ++y) {
      if (eps <= 0.0 || space(x, y) <= eps) pairs.emplace_back(x, y);
    }
  }
  return pairs;
}

}  // namespace ricci
