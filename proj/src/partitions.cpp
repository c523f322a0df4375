#include <algorithm>
#include <functional>
#include <mutex>
#include <set>

#include "ricci/error.hpp"
#include "ricci/model_zoo.hpp"

namespace ricci {

namespace {

void enumerate(unsigned remaining, unsigned max_part, Partition& current, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.push_back(current);
    return;
  }
  for (unsigned part = std::min(remaining, max_part); part >= 1; --part) {
    current.push_back(part);
    enumerate(remaining - part, part, current, out);
    current.pop_back();
  }
}

Partition normalized(Partition p) {
  std::sort(p.begin(), p.end(), std::greater<>());
  return p;
}

}  // namespace

std::vector<Partition> integer_partitions(unsigned N) {
  std::vector<Partition> out;
  Partition current;
  enumerate(N, N, current, out);
  return out;
}

std::string partition_label(const Partition& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) s += ",";
    s += std::to_string(p[i]);
  }
  return s + ")";
}

std::uint64_t centralizer_size(const Partition& p) {
  std::uint64_t z = 1;
  std::size_t i = 0;
  while (i < p.size()) {
    std::size_t j = i;
    while (j < p.size() && p[j] == p[i]) ++j;
    const std::uint64_t m = j - i;
    for (std::uint64_t t = 1; t <= m; ++t) z *= t * p[i];
    i = j;
  }
  return z;
}

std::shared_ptr<const PartitionSpace> partition_space(unsigned N) {
  if (N < 2 || N > kMaxSplitMergeN) {
    fail(N < 2 ? ErrorCode::kInvalidArgument : ErrorCode::kTooLarge,
         "split-merge needs 2 <= N <= " + std::to_string(kMaxSplitMergeN));
  }
  static std::mutex mutex;
  static std::map<unsigned, std::shared_ptr<const PartitionSpace>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  if (auto it = cache.find(N); it != cache.end()) return it->second;

  auto ps = std::make_shared<PartitionSpace>();
  ps->N = N;
  ps->partitions = integer_partitions(N);
  if (ps->partitions.size() > max_dense_states()) {
    fail(ErrorCode::kTooLarge, "split-merge state count " + std::to_string(ps->partitions.size()) +
                                   " exceeds the dense limit");
  }
  auto& index = ps->index;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < ps->partitions.size(); ++i) {
    index.emplace(ps->partitions[i], i);
    labels.push_back(partition_label(ps->partitions[i]));
  }
  std::set<std::pair<std::size_t, std::size_t>> links;
  for (std::size_t x = 0; x < ps->partitions.size(); ++x) {
    const Partition& p = ps->partitions[x];
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i > 0 && p[i] == p[i - 1]) continue;
      for (unsigned r = 1; r <= p[i] / 2; ++r) {
        Partition q = p;
        q[i] = r;
        q.push_back(p[i] - r);
        const std::size_t y = index.at(normalized(std::move(q)));
        links.emplace(std::min(x, y), std::max(x, y));
      }
    }
  }
  std::vector<GraphEdge> edges;
  edges.reserve(links.size());
  for (const auto& [u, v] : links) edges.push_back({u, v, 1.0});
  ps->space = std::make_shared<const FiniteMetricSpace>(FiniteMetricSpace::from_graph(std::move(labels), std::move(edges)));
  cache.emplace(N, ps);
  return ps;
}

std::map<std::size_t, std::uint64_t> split_merge_numerators(const PartitionSpace& ps, std::size_t x) {
  const auto& index = ps.index;
  const Partition& p = ps.partitions.at(x);
  std::map<std::size_t, std::uint64_t> row;
  row[x] += ps.N;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (unsigned r = 1; r < p[i]; ++r) {
      Partition q = p;
      q[i] = r;
      q.push_back(p[i] - r);
      row[index.at(normalized(std::move(q)))] += p[i];
    }
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      Partition q;
      for (std::size_t t = 0; t < p.size(); ++t) {
        if (t != i && t != j) q.push_back(p[t]);
      }
      q.push_back(p[i] + p[j]);
      row[index.at(normalized(std::move(q)))] += 2ULL * p[i] * p[j];
    }
  }
  return row;
}

std::shared_ptr<const ChainSpec> split_merge_chain(unsigned N) {
  const auto ps = partition_space(N);
  const std::size_t n = ps->partitions.size();
  const double denom = static_cast<double>(N) * N;
  std::vector<Eigen::Triplet<double>> trips;
  Vector pi(static_cast<Eigen::Index>(n));
  for (std::size_t x = 0; x < n; ++x) {
    for (const auto& [y, num] : split_merge_numerators(*ps, x)) {
      trips.emplace_back(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y), static_cast<double>(num) / denom);
    }
    pi(static_cast<Eigen::Index>(x)) = 1.0 / static_cast<double>(centralizer_size(ps->partitions[x]));
  }
  SparseMatrix P(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  P.setFromTriplets(trips.begin(), trips.end());
  pi /= pi.sum();
  return std::make_shared<const ChainSpec>(MarkovKernel(ps->space, std::move(P)), Distribution(std::move(pi)));
}

}  // namespace ricci
