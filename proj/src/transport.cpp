#include "ricci/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>

#include "ricci/error.hpp"

namespace ricci {

namespace {

constexpr double kTruncate = 1e-15;
constexpr std::int64_t kScale = 100'000'000'000'000'000;
constexpr std::int64_t kInfCap = std::numeric_limits<std::int64_t>::max() / 4;

using IntMeasure = std::vector<std::pair<State, std::int64_t>>;

// Drop dust, renormalise, then round to integers summing to kScale with
// largest-remainder repair (ties go to the lower state index).
IntMeasure quantize(const Measure& m) {
  Measure kept;
  double total = 0.0;
  for (auto [x, w] : m) {
    if (w >= kTruncate) {
      kept.emplace_back(x, w);
      total += w;
    }
  }
  if (kept.empty() || !(total > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "transport input has no mass");
  }
  IntMeasure out(kept.size());
  std::vector<double> frac(kept.size());
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const double scaled = kept[i].second / total * static_cast<double>(kScale);
    const double fl = std::floor(scaled);
    out[i] = {kept[i].first, static_cast<std::int64_t>(fl)};
    frac[i] = scaled - fl;
    assigned += out[i].second;
  }
  std::int64_t remainder = kScale - assigned;
  std::vector<std::size_t> order(kept.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t i = 0; remainder > 0; i = (i + 1) % order.size(), --remainder) {
    ++out[order[i]].second;
  }
  for (std::size_t i = 0; remainder < 0; i = (i + 1) % order.size()) {
    auto& v = out[order[order.size() - 1 - i]].second;
    if (v > 0) {
      --v;
      ++remainder;
    }
  }
  return out;
}

struct Arc {
  int to;
  int rev;
  std::int64_t cap;
  double cost;
};

// Primal-dual min-cost flow: Dijkstra on reduced costs to update node
// potentials, then a blocking flow over the zero-reduced-cost arcs.
class MinCostFlow {
 public:
  explicit MinCostFlow(int nodes) : g_(static_cast<std::size_t>(nodes)) {}

  int add_arc(int u, int v, std::int64_t cap, double cost) {
    auto& gu = g_[static_cast<std::size_t>(u)];
    auto& gv = g_[static_cast<std::size_t>(v)];
    gu.push_back({v, static_cast<int>(gv.size()), cap, cost});
    gv.push_back({u, static_cast<int>(gu.size()) - 1, 0, -cost});
    max_cost_ = std::max(max_cost_, std::abs(cost));
    return static_cast<int>(gu.size()) - 1;
  }

  const Arc& arc(int u, int i) const { return g_[static_cast<std::size_t>(u)][static_cast<std::size_t>(i)]; }

  std::int64_t solve(int s, int t) {
    const std::size_t n = g_.size();
    pot_.assign(n, 0.0);
    tol_ = 1e-11 * std::max(1.0, max_cost_);
    std::int64_t flow = 0;
    std::vector<double> dist(n);
    while (true) {
      shortest_paths(s, dist);
      if (!std::isfinite(dist[static_cast<std::size_t>(t)])) break;
      double reach = 0.0;
      for (double d : dist) {
        if (std::isfinite(d)) reach = std::max(reach, d);
      }
      for (std::size_t v = 0; v < n; ++v) pot_[v] += std::isfinite(dist[v]) ? dist[v] : reach;
      const std::int64_t pushed = blocking_flows(s, t);
      if (pushed == 0) break;
      flow += pushed;
    }
    return flow;
  }

 private:
  double reduced(int u, const Arc& a) const {
    return a.cost + pot_[static_cast<std::size_t>(u)] - pot_[static_cast<std::size_t>(a.to)];
  }

  void shortest_paths(int s, std::vector<double>& dist) const {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[static_cast<std::size_t>(s)] = 0.0;
    pq.emplace(0.0, s);
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[static_cast<std::size_t>(u)]) continue;
      for (const Arc& a : g_[static_cast<std::size_t>(u)]) {
        if (a.cap <= 0) continue;
        const double nd = d + std::max(0.0, reduced(u, a));
        if (nd < dist[static_cast<std::size_t>(a.to)]) {
          dist[static_cast<std::size_t>(a.to)] = nd;
          pq.emplace(nd, a.to);
        }
      }
    }
  }

  bool admissible(int u, const Arc& a) const { return a.cap > 0 && reduced(u, a) <= tol_; }

  std::int64_t blocking_flows(int s, int t) {
    const std::size_t n = g_.size();
    std::int64_t total = 0;
    std::vector<int> level(n);
    std::vector<std::size_t> next(n);
    while (true) {
      std::fill(level.begin(), level.end(), -1);
      std::queue<int> q;
      level[static_cast<std::size_t>(s)] = 0;
      q.push(s);
      while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (const Arc& a : g_[static_cast<std::size_t>(u)]) {
          if (level[static_cast<std::size_t>(a.to)] < 0 && admissible(u, a)) {
            level[static_cast<std::size_t>(a.to)] = level[static_cast<std::size_t>(u)] + 1;
            q.push(a.to);
          }
        }
      }
      if (level[static_cast<std::size_t>(t)] < 0) break;
      std::fill(next.begin(), next.end(), 0);
      while (true) {
        const std::int64_t f = augment(s, t, kInfCap, level, next);
        if (f == 0) break;
        total += f;
      }
    }
    return total;
  }

  // Iterative DFS along the level graph.
  std::int64_t augment(int s, int t, std::int64_t limit, const std::vector<int>& level,
                       std::vector<std::size_t>& next) {
    std::vector<std::pair<int, int>> path;  // (node, arc index)
    int u = s;
    while (true) {
      if (u == t) {
        std::int64_t f = limit;
        for (auto [v, i] : path) f = std::min(f, g_[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)].cap);
        for (auto [v, i] : path) {
          Arc& a = g_[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)];
          a.cap -= f;
          g_[static_cast<std::size_t>(a.to)][static_cast<std::size_t>(a.rev)].cap += f;
        }
        return f;
      }
      auto& arcs = g_[static_cast<std::size_t>(u)];
      auto& it = next[static_cast<std::size_t>(u)];
      bool advanced = false;
      for (; it < arcs.size(); ++it) {
        const Arc& a = arcs[it];
        if (level[static_cast<std::size_t>(a.to)] == level[static_cast<std::size_t>(u)] + 1 &&
            admissible(u, a)) {
          path.emplace_back(u, static_cast<int>(it));
          u = a.to;
          advanced = true;
          break;
        }
      }
      if (advanced) continue;
      if (path.empty()) return 0;
      // dead end: retreat and skip the arc that led here
      u = path.back().first;
      path.pop_back();
      ++next[static_cast<std::size_t>(u)];
    }
  }

  std::vector<std::vector<Arc>> g_;
  std::vector<double> pot_;
  double max_cost_ = 0.0;
  double tol_ = 0.0;
};

struct FlowResult {
  double cost = 0.0;
  std::vector<CouplingEntry> moved;  // integer masses stored as doubles
};

std::vector<std::int64_t> to_dense(const IntMeasure& m, std::size_t n) {
  std::vector<std::int64_t> out(n, 0);
  for (auto [x, w] : m) {
    if (x >= n) fail(ErrorCode::kInvalidArgument, "transport input state out of range");
    out[x] = w;
  }
  return out;
}

struct Problem {
  std::size_t n = 0;
  IntMeasure supply;   // excess of mu over nu
  IntMeasure demand;   // excess of nu over mu (positive numbers)
  IntMeasure common;   // min(mu, nu), kept in place
};

Problem build_problem(const Measure& mu, const Measure& nu, std::size_t n) {
  const auto a = to_dense(quantize(mu), n);
  const auto b = to_dense(quantize(nu), n);
  Problem pr;
  pr.n = n;
  for (State x = 0; x < n; ++x) {
    const std::int64_t c = std::min(a[x], b[x]);
    if (c > 0) pr.common.emplace_back(x, c);
    if (a[x] > b[x]) pr.supply.emplace_back(x, a[x] - b[x]);
    if (b[x] > a[x]) pr.demand.emplace_back(x, b[x] - a[x]);
  }
  return pr;
}

bool use_graph(const Problem& pr, const FiniteMetricSpace& space) {
  if (!space.has_graph()) return false;
  const double bipartite = static_cast<double>(pr.supply.size()) * static_cast<double>(pr.demand.size());
  return 2.0 * static_cast<double>(space.graph().size()) < bipartite;
}

FlowResult solve_bipartite(const Problem& pr, const FiniteMetricSpace& space, bool want_moves) {
  const int ns = static_cast<int>(pr.supply.size());
  const int nd = static_cast<int>(pr.demand.size());
  const int s = ns + nd;
  const int t = s + 1;
  MinCostFlow mcf(t + 1);
  for (int i = 0; i < ns; ++i) mcf.add_arc(s, i, pr.supply[static_cast<std::size_t>(i)].second, 0.0);
  std::vector<std::vector<int>> arc_id(static_cast<std::size_t>(ns), std::vector<int>(static_cast<std::size_t>(nd)));
  for (int i = 0; i < ns; ++i) {
    for (int j = 0; j < nd; ++j) {
      arc_id[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          mcf.add_arc(i, ns + j, kInfCap, space(pr.supply[static_cast<std::size_t>(i)].first, pr.demand[static_cast<std::size_t>(j)].first));
    }
  }
  for (int j = 0; j < nd; ++j) mcf.add_arc(ns + j, t, pr.demand[static_cast<std::size_t>(j)].second, 0.0);
  mcf.solve(s, t);
  FlowResult res;
  for (int i = 0; i < ns; ++i) {
    for (int j = 0; j < nd; ++j) {
      const Arc& a = mcf.arc(i, arc_id[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      const std::int64_t f = kInfCap - a.cap;
      if (f <= 0) continue;
      const State x = pr.supply[static_cast<std::size_t>(i)].first;
      const State y = pr.demand[static_cast<std::size_t>(j)].first;
      res.cost += static_cast<double>(f) * space(x, y);
      if (want_moves) res.moved.push_back({x, y, static_cast<double>(f)});
    }
  }
  res.cost /= static_cast<double>(kScale);
  return res;
}

FlowResult solve_graph(const Problem& pr, const FiniteMetricSpace& space, bool want_moves) {
  const auto n = static_cast<int>(pr.n);
  const int s = n;
  const int t = n + 1;
  MinCostFlow mcf(n + 2);
  for (auto [x, w] : pr.supply) mcf.add_arc(s, static_cast<int>(x), w, 0.0);
  for (auto [y, w] : pr.demand) mcf.add_arc(static_cast<int>(y), t, w, 0.0);
  const auto& edges = space.graph();
  std::vector<std::pair<int, int>> ids(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    ids[e].first = mcf.add_arc(static_cast<int>(edges[e].u), static_cast<int>(edges[e].v), kInfCap, edges[e].length);
    ids[e].second = mcf.add_arc(static_cast<int>(edges[e].v), static_cast<int>(edges[e].u), kInfCap, edges[e].length);
  }
  mcf.solve(s, t);
  FlowResult res;
  // net flow on each undirected edge
  std::vector<std::vector<std::pair<int, std::int64_t>>> out(pr.n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::int64_t f = (kInfCap - mcf.arc(static_cast<int>(edges[e].u), ids[e].first).cap) -
                           (kInfCap - mcf.arc(static_cast<int>(edges[e].v), ids[e].second).cap);
    if (f == 0) continue;
    res.cost += static_cast<double>(std::abs(f)) * edges[e].length;
    if (f > 0) {
      out[edges[e].u].emplace_back(static_cast<int>(edges[e].v), f);
    } else {
      out[edges[e].v].emplace_back(static_cast<int>(edges[e].u), -f);
    }
  }
  res.cost /= static_cast<double>(kScale);
  if (!want_moves) return res;
  // Path decomposition of the (acyclic) optimal flow into source-sink moves.
  std::vector<std::int64_t> need(pr.n, 0);
  for (auto [y, w] : pr.demand) need[y] = w;
  std::vector<std::size_t> cursor(pr.n, 0);
  for (auto [x, w] : pr.supply) {
    std::int64_t left = w;
    while (left > 0) {
      std::vector<std::pair<State, std::size_t>> path;
      State u = x;
      while (need[u] == 0) {
        auto& c = cursor[u];
        while (c < out[u].size() && out[u][c].second == 0) ++c;
        if (c >= out[u].size()) fail(ErrorCode::kInvalidArgument, "flow decomposition failed");
        path.emplace_back(u, c);
        u = static_cast<State>(out[u][c].first);
      }
      std::int64_t f = std::min(left, need[u]);
      for (auto [v, c] : path) f = std::min(f, out[v][c].second);
      for (auto [v, c] : path) out[v][c].second -= f;
      need[u] -= f;
      left -= f;
      res.moved.push_back({x, u, static_cast<double>(f)});
    }
  }
  return res;
}

FlowResult solve(const Problem& pr, const FiniteMetricSpace& space, bool want_moves) {
  if (pr.supply.empty()) return {};
  return use_graph(pr, space) ? solve_graph(pr, space, want_moves)
                              : solve_bipartite(pr, space, want_moves);
}

}  // namespace

Measure to_measure(const Vector& weights) {
  Measure m;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights(i) != 0.0) m.emplace_back(static_cast<State>(i), weights(i));
  }
  return m;
}

Measure to_measure(const Distribution& mu) { return to_measure(mu.weights()); }

Measure row_measure(const SparseMatrix& p, State x) {
  Measure m;
  for (SparseMatrix::InnerIterator it(p, static_cast<Eigen::Index>(x)); it; ++it) {
    if (it.value() != 0.0) m.emplace_back(static_cast<State>(it.col()), it.value());
  }
  return m;
}

Matrix Coupling::dense() const {
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const auto& e : entries) out(static_cast<Eigen::Index>(e.x), static_cast<Eigen::Index>(e.y)) += e.mass;
  return out;
}

Vector Coupling::first_marginal() const {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(n));
  for (const auto& e : entries) out(static_cast<Eigen::Index>(e.x)) += e.mass;
  return out;
}

Vector Coupling::second_marginal() const {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(n));
  for (const auto& e : entries) out(static_cast<Eigen::Index>(e.y)) += e.mass;
  return out;
}

double w1(const Measure& mu, const Measure& nu, const FiniteMetricSpace& space) {
  return solve(build_problem(mu, nu, space.size()), space, false).cost;
}

double w1(const Distribution& mu, const Distribution& nu, const FiniteMetricSpace& space) {
  if (mu.size() != space.size() || nu.size() != space.size()) {
    fail(ErrorCode::kInvalidArgument, "distributions do not match the space");
  }
  return w1(to_measure(mu), to_measure(nu), space);
}

Coupling optimal_coupling(const Measure& mu, const Measure& nu, const FiniteMetricSpace& space) {
  const Problem pr = build_problem(mu, nu, space.size());
  FlowResult fr = solve(pr, space, true);
  Coupling c;
  c.n = space.size();
  const double scale = static_cast<double>(kScale);
  for (auto [x, w] : pr.common) c.entries.push_back({x, x, static_cast<double>(w) / scale});
  for (auto& e : fr.moved) c.entries.push_back({e.x, e.y, e.mass / scale});
  std::sort(c.entries.begin(), c.entries.end(), [](const CouplingEntry& a, const CouplingEntry& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  std::vector<CouplingEntry> merged;
  for (const auto& e : c.entries) {
    if (!merged.empty() && merged.back().x == e.x && merged.back().y == e.y) {
      merged.back().mass += e.mass;
    } else {
      merged.push_back(e);
    }
  }
  c.entries = std::move(merged);
  for (const auto& e : c.entries) c.cost += e.mass * space(e.x, e.y);
  return c;
}

Coupling optimal_coupling(const Distribution& mu, const Distribution& nu,
                          const FiniteMetricSpace& space) {
  if (mu.size() != space.size() || nu.size() != space.size()) {
    fail(ErrorCode::kInvalidArgument, "distributions do not match the space");
  }
  return optimal_coupling(to_measure(mu), to_measure(nu), space);
}

double tv_distance(const Vector& mu, const Vector& nu) {
  if (mu.size() != nu.size()) fail(ErrorCode::kInvalidArgument, "distributions differ in length");
  return 0.5 * (mu - nu).lpNorm<1>();
}

double tv_distance(const Distribution& mu, const Distribution& nu) {
  return tv_distance(mu.weights(), nu.weights());
}

double coupling_marginal_error(const Coupling& c, const Vector& mu, const Vector& nu) {
  return std::max((c.first_marginal() - mu).lpNorm<Eigen::Infinity>(),
                  (c.second_marginal() - nu).lpNorm<Eigen::Infinity>());
}

}  // namespace ricci
