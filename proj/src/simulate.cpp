#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "ricci/error.hpp"
#include "ricci/mcmc_bounds.hpp"

namespace ricci {

namespace {

std::mt19937_64 replica_engine(std::uint64_t seed, std::uint64_t replica) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replica), static_cast<std::uint32_t>(replica >> 32)};
  return std::mt19937_64(seq);
}

double unit(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

// Cumulative sums per row, aligned with the sparse storage.
struct RowSampler {
  const SparseMatrix* p = nullptr;
  std::vector<double> cdf;

  explicit RowSampler(const SparseMatrix& m) : p(&m), cdf(static_cast<std::size_t>(m.nonZeros())) {
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
      double acc = 0.0;
      for (Eigen::Index i = m.outerIndexPtr()[r]; i < m.outerIndexPtr()[r + 1]; ++i) {
        acc += m.valuePtr()[i];
        cdf[static_cast<std::size_t>(i)] = acc;
      }
    }
  }

  State next(State x, double u) const {
    const Eigen::Index lo = p->outerIndexPtr()[x];
    const Eigen::Index hi = p->outerIndexPtr()[x + 1];
    const double total = cdf[static_cast<std::size_t>(hi - 1)];
    const auto first = cdf.begin() + lo;
    const auto last = cdf.begin() + hi;
    auto it = std::upper_bound(first, last, u * total);
    if (it == last) --it;
    return static_cast<State>(p->innerIndexPtr()[it - cdf.begin()]);
  }
};

std::vector<double> cumulative(const Vector& w) {
  std::vector<double> c(static_cast<std::size_t>(w.size()));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) c[static_cast<std::size_t>(i)] = acc += w(i);
  return c;
}

State draw(const std::vector<double>& cdf, double u) {
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u * cdf.back());
  if (it == cdf.end()) --it;
  return static_cast<State>(it - cdf.begin());
}

template <class Fn>
void parallel_ranges(std::size_t count, unsigned workers, Fn fn) {
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, count))));
  if (workers == 1) {
    fn(0, count);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(fn, lo, hi);
  }
  for (auto& t : pool) t.join();
}

}  // namespace

Simulation simulate(const McmcPlan& plan, const Vector& f, std::size_t replicas, std::uint64_t seed,
                    unsigned workers) {
  const auto& chain = *plan.chain;
  if (static_cast<std::size_t>(f.size()) != chain.size()) fail(ErrorCode::kInvalidArgument, "f has the wrong length");
  if (!f.allFinite()) fail(ErrorCode::kInvalidArgument, "f must be finite");
  if (replicas < 1) fail(ErrorCode::kInvalidArgument, "need at least one replica");
  const RowSampler sampler(chain.kernel().matrix());
  const auto q_cdf = cumulative(plan.q.weights());
  Simulation sim;
  sim.Z.assign(replicas, 0.0);
  const double len = static_cast<double>(plan.N - plan.t0);
  parallel_ranges(replicas, workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = lo; r < hi; ++r) {
      auto gen = replica_engine(seed, r);
      State x = draw(q_cdf, unit(gen));
      double sum = 0.0;
      for (std::size_t i = 1; i <= plan.N; ++i) {
        x = sampler.next(x, unit(gen));
        if (i > plan.t0) sum += f(static_cast<Eigen::Index>(x));
      }
      sim.Z[r] = sum / len;
    }
  });
  const double R = static_cast<double>(replicas);
  double mean = 0.0;
  for (double z : sim.Z) mean += z;
  mean /= R;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double z : sim.Z) {
    const double d = z - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  sim.mean = mean;
  sim.variance = replicas > 1 ? m2 / (R - 1.0) : 0.0;
  sim.se_mean = std::sqrt(sim.variance / R);
  const double pop2 = m2 / R;
  sim.se_variance = std::sqrt(std::max(0.0, m4 / R - pop2 * pop2) / R);
  return sim;
}

std::vector<State> sample_distribution(const Distribution& pi, std::size_t count, std::uint64_t seed) {
  const auto cdf = cumulative(pi.weights());
  auto gen = replica_engine(seed, 0);
  std::vector<State> out(count);
  for (auto& s : out) s = draw(cdf, unit(gen));
  return out;
}

EmpiricalTail empirical_tail(const std::vector<double>& values, double center, double t) {
  EmpiricalTail e;
  e.t = t;
  if (values.empty()) return e;
  std::size_t hits = 0;
  for (double v : values) {
    if (std::abs(v - center) >= t) ++hits;
  }
  const double n = static_cast<double>(values.size());
  e.probability = static_cast<double>(hits) / n;
  e.se = std::sqrt(e.probability * (1.0 - e.probability) / n);
  return e;
}

}  // namespace ricci
