#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "ricci/error.hpp"
#include "ricci/model_zoo.hpp"

namespace ricci {

namespace {

void check_cube(std::size_t N, std::size_t R) {
  if (N < 1) fail(ErrorCode::kInvalidArgument, "binary cube needs N >= 1");
  if (R > N) fail(ErrorCode::kInvalidArgument, "binary cube needs R <= N");
  if (N > kMaxCubeN) fail(ErrorCode::kTooLarge, "binary cube is capped at N = " + std::to_string(kMaxCubeN));
}

std::vector<std::int64_t> state_index(std::size_t N, const std::vector<std::uint64_t>& states) {
  std::vector<std::int64_t> index(std::size_t{1} << N, -1);
  for (std::size_t i = 0; i < states.size(); ++i) index[states[i]] = static_cast<std::int64_t>(i);
  return index;
}

}  // namespace

std::vector<std::uint64_t> cube_states(std::size_t N, std::size_t R) {
  check_cube(N, R);
  std::vector<std::uint64_t> out;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << N); ++c) {
    if (static_cast<std::size_t>(std::popcount(c)) >= R) out.push_back(c);
  }
  return out;
}

SparseMatrix binary_cube_kernel(std::size_t N, std::size_t R) {
  const auto states = cube_states(N, R);
  const auto index = state_index(N, states);
  const auto n = static_cast<Eigen::Index>(states.size());
  const double move = 1.0 / (2.0 * static_cast<double>(N));
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(states.size() * (N + 1));
  for (std::size_t s = 0; s < states.size(); ++s) {
    const std::uint64_t c = states[s];
    const bool floor = static_cast<std::size_t>(std::popcount(c)) == R;
    double stay = 1.0;
    for (std::size_t i = 0; i < N; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      if (floor && (c & bit) != 0U) continue;
      trips.emplace_back(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(index[c ^ bit]), move);
      stay -= move;
    }
    trips.emplace_back(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s), stay);
  }
  SparseMatrix P(n, n);
  P.setFromTriplets(trips.begin(), trips.end());
  return P;
}

std::shared_ptr<const ChainSpec> binary_cube_chain(std::size_t N, std::size_t R) {
  const auto states = cube_states(N, R);
  if (states.size() > max_dense_states()) {
    fail(ErrorCode::kTooLarge, "binary cube with " + std::to_string(states.size()) + " states exceeds the dense limit");
  }
  const auto index = state_index(N, states);
  std::vector<std::string> labels;
  std::vector<GraphEdge> edges;
  for (std::size_t s = 0; s < states.size(); ++s) {
    std::string label(N, '0');
    for (std::size_t i = 0; i < N; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      if ((states[s] & bit) != 0U) {
        label[i] = '1';
        const auto t = index[states[s] ^ bit];
        if (t >= 0) edges.push_back({s, static_cast<State>(t), 1.0});
      }
    }
    labels.push_back(std::move(label));
  }
  auto space = std::make_shared<const FiniteMetricSpace>(FiniteMetricSpace::from_graph(std::move(labels), std::move(edges)));

  // Site permutations preserve the level set.
  std::vector<Permutation> gens;
  auto lift = [&](const std::vector<std::size_t>& sigma) {
    Permutation perm(states.size());
    for (std::size_t s = 0; s < states.size(); ++s) {
      std::uint64_t image = 0;
      for (std::size_t i = 0; i < N; ++i) {
        if (((states[s] >> i) & 1U) != 0U) image |= std::uint64_t{1} << sigma[i];
      }
      perm[s] = static_cast<State>(index[image]);
    }
    return perm;
  };
  if (N >= 2) {
    std::vector<std::size_t> swap(N);
    std::iota(swap.begin(), swap.end(), 0);
    std::swap(swap[0], swap[1]);
    gens.push_back(lift(swap));
  }
  if (N >= 3) {
    std::vector<std::size_t> cycle(N);
    for (std::size_t i = 0; i < N; ++i) cycle[i] = (i + 1) % N;
    gens.push_back(lift(cycle));
  }
  const auto n = static_cast<Eigen::Index>(states.size());
  return std::make_shared<const ChainSpec>(MarkovKernel(std::move(space), binary_cube_kernel(N, R)),
                                           Distribution(Vector::Constant(n, 1.0 / static_cast<double>(n))),
                                           std::move(gens));
}

// ===========================================================================
// Curvature recursion

double cube_rho(std::size_t N, std::size_t R) {
  const double n = static_cast<double>(N);
  const double r = static_cast<double>(R);
  if (!(n - 2.0 * r > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return 0.5 - 1.0 / std::exp(1.0) - r / (n - 2.0 * r);
}

double CubeTable::tilde(std::size_t k, std::size_t j) const {
  if (k < 1 || k > K || j < R || j >= N) fail(ErrorCode::kInvalidArgument, "cube table index out of range");
  return kappa_tilde(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(j - R));
}

double CubeTable::hat(std::size_t k, std::size_t j) const {
  if (k < 1 || k > K || j < R || j >= N) fail(ErrorCode::kInvalidArgument, "cube table index out of range");
  return kappa_hat(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(j - R));
}

double CubeTable::min_tilde(std::size_t k) const {
  if (k < 1 || k > K) fail(ErrorCode::kInvalidArgument, "cube table index out of range");
  return kappa_tilde.row(static_cast<Eigen::Index>(k - 1)).minCoeff();
}

std::size_t CubeTable::first_positive() const {
  for (std::size_t k = 1; k <= K; ++k) {
    if (min_tilde(k) > 0.0) return k;
  }
  return 0;
}

double CubeTable::kappa_sigma_c_bound() const {
  if (!(rho > 0.0)) return std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(N);
  const double r = static_cast<double>(R);
  return n / rho * (1.0 + r / (n - 2.0 * r));
}

CubeTable cube_recursion(std::size_t N, std::size_t R, std::size_t K) {
  if (K < 1) fail(ErrorCode::kInvalidArgument, "cube recursion needs K >= 1");
  if (N < 1 || R >= N) fail(ErrorCode::kInvalidArgument, "cube recursion needs R < N");
  CubeTable t;
  t.N = N;
  t.R = R;
  t.K = K;
  t.rho = cube_rho(N, R);
  const auto width = static_cast<Eigen::Index>(N - R);
  t.kappa_tilde.resize(static_cast<Eigen::Index>(K), width);
  t.kappa_hat.resize(static_cast<Eigen::Index>(K), width);
  const double n = static_cast<double>(N);
  const double r = static_cast<double>(R);

  Eigen::RowVectorXd cur(width);
  cur(0) = (2.0 - r) / (2.0 * n);
  for (Eigen::Index c = 1; c < width; ++c) cur(c) = 1.0 / n;
  t.kappa_tilde.row(0) = cur;
  Eigen::RowVectorXd next(width);
  for (std::size_t k = 2; k <= K; ++k) {
    for (Eigen::Index c = 0; c < width; ++c) {
      const double j = r + static_cast<double>(c);
      const double up = c + 1 < width ? cur(c + 1) : 0.0;  // coefficient vanishes at j = N-1
      if (c == 0) {
        next(c) = (2.0 - r) / (2.0 * n) + (n - 1.0 + r) / (2.0 * n) * cur(0) + (n - r - 1.0) / (2.0 * n) * up;
      } else {
        next(c) = 1.0 / n + (n - 1.0) / (2.0 * n) * cur(c) + j / (2.0 * n) * cur(c - 1) +
                  (n - j - 1.0) / (2.0 * n) * up;
      }
    }
    cur.swap(next);
    t.kappa_tilde.row(static_cast<Eigen::Index>(k - 1)) = cur;
  }

  const double eps = r / n;
  for (std::size_t k = 1; k <= K; ++k) {
    const double kk = static_cast<double>(k);
    const double drift = (1.0 - std::exp(-kk / n)) - (kk - 1.0) / (2.0 * n);
    for (Eigen::Index c = 0; c < width; ++c) {
      const double lead = eps == 0.0 ? 0.0 : -eps / (1.0 - 2.0 * eps) * std::pow(eps / (1.0 - eps), static_cast<double>(c));
      t.kappa_hat(static_cast<Eigen::Index>(k - 1), c) = lead + drift;
    }
  }
  return t;
}

}  // namespace ricci
