#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "ricci/chain_geometry.hpp"
#include "ricci/error.hpp"

namespace ricci {

namespace {

struct Partial {
  std::vector<double> value;
  std::vector<char> assigned;
};

// Key for deduplicating partial assignments: assigned mask plus values
// rounded well below the feasibility tolerance.
std::vector<long long> key_of(const Partial& p) {
  std::vector<long long> key;
  key.reserve(2 * p.value.size());
  for (std::size_t i = 0; i < p.value.size(); ++i) {
    key.push_back(p.assigned[i]);
    key.push_back(p.assigned[i] ? std::llround(p.value[i] * 1e9) : 0);
  }
  return key;
}

}  // namespace

// Var is convex in f, so its supremum over the Lipschitz polytope (with one
// point pinned at 0) is attained at a vertex. Every vertex is cut out by a
// spanning tree of tight constraints f(z) = f(y) +- d(y, z); growing
// feasible partial assignments one tight edge at a time reaches all of them.
double max_lipschitz_variance(const FiniteMetricSpace& space, const Measure& mu) {
  Measure pts;
  double total = 0.0;
  for (auto [x, w] : mu) {
    if (w > 0.0) {
      pts.emplace_back(x, w);
      total += w;
    }
  }
  const std::size_t m = pts.size();
  if (m <= 1) return 0.0;
  if (m > kExactSupportLimit) {
    fail(ErrorCode::kTooLarge, "exact local dimension supports at most " +
                                   std::to_string(kExactSupportLimit) + " points");
  }
  for (auto& p : pts) p.second /= total;
  const double tol = 1e-12 * std::max(1.0, space.diam());
  auto dist = [&](std::size_t a, std::size_t b) { return space(pts[a].first, pts[b].first); };

  Partial start{std::vector<double>(m, 0.0), std::vector<char>(m, 0)};
  start.assigned[0] = 1;
  std::vector<Partial> frontier{start};
  for (std::size_t level = 1; level < m; ++level) {
    std::set<std::vector<long long>> seen;
    std::vector<Partial> next;
    for (const Partial& p : frontier) {
      for (std::size_t z = 0; z < m; ++z) {
        if (p.assigned[z]) continue;
        for (std::size_t y = 0; y < m; ++y) {
          if (!p.assigned[y]) continue;
          for (double sign : {-1.0, 1.0}) {
            const double v = p.value[y] + sign * dist(y, z);
            bool feasible = true;
            for (std::size_t a = 0; a < m && feasible; ++a) {
              if (p.assigned[a] && std::abs(v - p.value[a]) > dist(a, z) + tol) feasible = false;
            }
            if (!feasible) continue;
            Partial q = p;
            q.value[z] = v;
            q.assigned[z] = 1;
            if (seen.insert(key_of(q)).second) next.push_back(std::move(q));
          }
        }
      }
    }
    frontier = std::move(next);
  }
  double best = 0.0;
  for (const Partial& p : frontier) {
    double mean = 0.0;
    double second = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      mean += pts[i].second * p.value[i];
      second += pts[i].second * p.value[i] * p.value[i];
    }
    best = std::max(best, second - mean * mean);
  }
  return best;
}

}  // namespace ricci
