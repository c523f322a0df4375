#include <algorithm>
#include <cmath>
#include <numeric>

#include "ricci/error.hpp"
#include "ricci/model_zoo.hpp"

namespace ricci {

namespace {

void check_sites(std::size_t N, Scan scan) {
  if (N < 1) fail(ErrorCode::kInvalidArgument, "spin model needs at least one site");
  const std::size_t cap = scan == Scan::kSystemic ? kMaxSystemicSites : kMaxSpinSites;
  if (N > cap) {
    fail(ErrorCode::kTooLarge, "Glauber chain is capped at " + std::to_string(cap) + " sites for this scan");
  }
}

// conditional[i * n + c] = P(w_i = +1 | c).
std::vector<double> conditional_table(const SpinModel& model) {
  const std::size_t n = std::size_t{1} << model.N;
  std::vector<double> table(model.N * n);
  for (std::size_t i = 0; i < model.N; ++i) {
    for (std::size_t c = 0; c < n; ++c) table[i * n + c] = model.conditional_plus(i, c);
  }
  return table;
}

Permutation site_permutation(std::size_t N, const std::vector<std::size_t>& sigma) {
  const std::size_t n = std::size_t{1} << N;
  Permutation perm(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t image = 0;
    for (std::size_t i = 0; i < N; ++i) {
      if (((c >> i) & 1U) != 0U) image |= std::size_t{1} << sigma[i];
    }
    perm[c] = image;
  }
  return perm;
}

Permutation global_flip(std::size_t N) {
  const std::size_t n = std::size_t{1} << N;
  Permutation perm(n);
  for (std::size_t c = 0; c < n; ++c) perm[c] = (n - 1) ^ c;
  return perm;
}

std::vector<Permutation> all_site_generators(std::size_t N) {
  std::vector<Permutation> gens;
  if (N < 2) return gens;
  std::vector<std::size_t> swap(N);
  std::iota(swap.begin(), swap.end(), 0);
  std::swap(swap[0], swap[1]);
  gens.push_back(site_permutation(N, swap));
  if (N > 2) {
    std::vector<std::size_t> cycle(N);
    for (std::size_t i = 0; i < N; ++i) cycle[i] = (i + 1) % N;
    gens.push_back(site_permutation(N, cycle));
  }
  return gens;
}

}  // namespace

std::string spin_label(std::uint64_t config, std::size_t N) {
  std::string s(N, '-');
  for (std::size_t i = 0; i < N; ++i) {
    if (((config >> i) & 1U) != 0U) s[i] = '+';
  }
  return s;
}

SpinModel curie_weiss_model(std::size_t N, double beta, double h) {
  if (N < 1) fail(ErrorCode::kInvalidArgument, "Curie-Weiss needs N >= 1");
  if (!std::isfinite(beta) || !std::isfinite(h)) fail(ErrorCode::kInvalidArgument, "beta and h must be finite");
  SpinModel m;
  m.N = N;
  const auto n = static_cast<Eigen::Index>(N);
  m.J = Matrix::Constant(n, n, beta / static_cast<double>(N));
  m.J.diagonal().setZero();
  m.h = Vector::Constant(n, h);
  m.beta = beta;
  m.field = h;
  return m;
}

SpinModel ising1d_model(std::size_t N, double beta, double h, Boundary boundary) {
  if (N < 2) fail(ErrorCode::kInvalidArgument, "1D Ising needs N >= 2");
  if (!std::isfinite(beta) || !std::isfinite(h)) fail(ErrorCode::kInvalidArgument, "beta and h must be finite");
  SpinModel m;
  m.N = N;
  const auto n = static_cast<Eigen::Index>(N);
  m.J = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    m.J(i, i + 1) = beta;
    m.J(i + 1, i) = beta;
  }
  m.h = Vector::Constant(n, h);
  const double edge = boundary == Boundary::kMinus ? -beta : boundary == Boundary::kPlus ? beta : 0.0;
  m.h(0) += edge;
  m.h(n - 1) += edge;
  m.beta = beta;
  m.field = h;
  return m;
}

Vector gibbs_distribution(const SpinModel& model) {
  const std::size_t n = std::size_t{1} << model.N;
  Vector e(static_cast<Eigen::Index>(n));
  for (std::size_t c = 0; c < n; ++c) e(static_cast<Eigen::Index>(c)) = model.energy(c);
  const double top = e.maxCoeff();
  Vector pi = (e.array() - top).exp().matrix();
  return pi / pi.sum();
}

SparseMatrix glauber_kernel(const SpinModel& model, Scan scan) {
  check_sites(model.N, scan);
  const std::size_t N = model.N;
  const std::size_t n = std::size_t{1} << N;
  const auto table = conditional_table(model);
  const auto en = static_cast<Eigen::Index>(n);
  SparseMatrix P(en, en);
  if (scan == Scan::kRandom) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(n * (N + 1));
    const double w = 1.0 / static_cast<double>(N);
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t i = 0; i < N; ++i) {
        const std::size_t bit = std::size_t{1} << i;
        const double p = table[i * n + c];
        trips.emplace_back(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c | bit), w * p);
        trips.emplace_back(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c & ~bit), w * (1.0 - p));
      }
    }
    P.setFromTriplets(trips.begin(), trips.end());
    P.prune(0.0);
    return P;
  }
  // One sweep over sites 0..N-1, propagated row by row.
  std::vector<Eigen::Triplet<double>> trips;
  Vector row(en);
  Vector next(en);
  for (std::size_t c = 0; c < n; ++c) {
    row.setZero();
    row(static_cast<Eigen::Index>(c)) = 1.0;
    for (std::size_t i = 0; i < N; ++i) {
      const std::size_t bit = std::size_t{1} << i;
      next.setZero();
      for (std::size_t s = 0; s < n; ++s) {
        const double m = row(static_cast<Eigen::Index>(s));
        if (m == 0.0) continue;
        const double p = table[i * n + s];
        next(static_cast<Eigen::Index>(s | bit)) += m * p;
        next(static_cast<Eigen::Index>(s & ~bit)) += m * (1.0 - p);
      }
      row.swap(next);
    }
    for (std::size_t s = 0; s < n; ++s) {
      const double m = row(static_cast<Eigen::Index>(s));
      if (m > 0.0) trips.emplace_back(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(s), m);
    }
  }
  P.setFromTriplets(trips.begin(), trips.end());
  return P;
}

std::shared_ptr<const ChainSpec> glauber_chain(const SpinModel& model, Scan scan, std::vector<Permutation> symmetries) {
  SparseMatrix P = glauber_kernel(model, scan);
  const std::size_t N = model.N;
  const std::size_t n = std::size_t{1} << N;
  if (n > max_dense_states()) {
    fail(ErrorCode::kTooLarge, "Glauber chain with " + std::to_string(n) + " states exceeds the dense limit");
  }
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t c = 0; c < n; ++c) labels.push_back(spin_label(c, N));
  std::vector<GraphEdge> edges;
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < N; ++i) {
      const std::size_t other = c ^ (std::size_t{1} << i);
      if (c < other) edges.push_back({c, other, 1.0});
    }
  }
  auto space = std::make_shared<const FiniteMetricSpace>(FiniteMetricSpace::from_graph(std::move(labels), std::move(edges)));
  return std::make_shared<const ChainSpec>(MarkovKernel(std::move(space), std::move(P)),
                                           Distribution(gibbs_distribution(model)), std::move(symmetries));
}

std::shared_ptr<const ChainSpec> curie_weiss_chain(std::size_t N, double beta, double h, Scan scan) {
  check_sites(N, scan);
  const SpinModel model = curie_weiss_model(N, beta, h);
  std::vector<Permutation> gens;
  if (scan == Scan::kRandom) gens = all_site_generators(N);
  if (h == 0.0) gens.push_back(global_flip(N));
  return glauber_chain(model, scan, std::move(gens));
}

std::shared_ptr<const ChainSpec> ising1d_chain(std::size_t N, double beta, double h, Scan scan, Boundary boundary) {
  check_sites(N, scan);
  const SpinModel model = ising1d_model(N, beta, h, boundary);
  std::vector<Permutation> gens;
  if (scan == Scan::kRandom) {
    std::vector<std::size_t> reflect(N);
    for (std::size_t i = 0; i < N; ++i) reflect[i] = N - 1 - i;
    gens.push_back(site_permutation(N, reflect));
  }
  if (h == 0.0 && boundary == Boundary::kFree) gens.push_back(global_flip(N));
  return glauber_chain(model, scan, std::move(gens));
}

}  // namespace ricci
