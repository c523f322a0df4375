#include "ricci/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <unordered_map>

#include "ricci/error.hpp"

namespace ricci {

namespace {

Vector propagate(const MarkovKernel& p, State x, unsigned k) {
  Vector row = Vector::Zero(static_cast<Eigen::Index>(p.size()));
  row(static_cast<Eigen::Index>(x)) = 1.0;
  for (unsigned i = 0; i < k; ++i) row = p.step(row);
  return row;
}

double pair_value(const FiniteMetricSpace& space, const Vector& rx, const Vector& ry, State x,
                  State y) {
  return 1.0 - w1(to_measure(rx), to_measure(ry), space) / space(x, y);
}

std::vector<double> one_minus(const std::vector<double>& kappa) {
  std::vector<double> u(kappa.size());
  for (std::size_t i = 0; i < kappa.size(); ++i) u[i] = std::max(0.0, 1.0 - kappa[i]);
  return u;
}

void finish_profile(CurvatureProfile& prof) {
  prof.running_sigma_c.resize(prof.kappa.size());
  double run = 0.0;
  prof.M = 0.0;
  for (std::size_t k = 0; k < prof.kappa.size(); ++k) {
    run += 1.0 - prof.kappa[k];
    prof.running_sigma_c[k] = run;
    prof.M = std::max(prof.M, 1.0 - prof.kappa[k]);
  }
  prof.max_submultiplicativity_violation = submultiplicativity_violation(prof.kappa);
}

// Closure of sum_i g(1 - kappa_i) with g(u) = u^power, split as the exact
// head, explicit terms up to the next block boundary of the best lag, and a
// geometric remainder. Each term is weighted by exp(c b) for its bound b.
double close_series(const CurvatureProfile& prof, int power, double c) {
  const auto lag = best_decay_lag(prof);
  if (!lag) fail(ErrorCode::kNoPositiveKappa, "no kappa_k > 0 within the profile horizon");
  const unsigned K = prof.K();
  const auto u = one_minus(prof.kappa);
  auto g = [&](double v) { return power == 1 ? v : v * v; };
  double total = 0.0;
  for (unsigned i = 0; i <= K; ++i) total += std::exp(c * u[i]) * g(u[i]);
  const unsigned ks = *lag;
  const unsigned long long q0 = K / ks + 1;
  const unsigned long long boundary = q0 * ks;
  for (unsigned long long i = K + 1ULL; i < boundary; ++i) {
    const double b = one_minus_kappa_bound(prof, i);
    total += std::exp(c * b) * g(b);
  }
  const double us = u[ks];
  double head = 0.0;
  double umax = 0.0;
  for (unsigned r = 0; r < ks; ++r) {
    head += g(u[r]);
    umax = std::max(umax, u[r]);
  }
  const double lead = std::pow(us, static_cast<double>(q0));
  const double bmax = lead * umax;
  const double ratio = g(us);
  total += std::exp(c * bmax) * g(lead) / (1.0 - ratio) * head;
  return total;
}

}  // namespace

double kappa_pair(const ChainSpec& chain, State x, State y, unsigned k, bool* same_pair) {
  const std::size_t n = chain.size();
  if (x >= n || y >= n) fail(ErrorCode::kInvalidArgument, "state out of range");
  if (same_pair) *same_pair = (x == y);
  if (x == y) return 1.0;
  if (k == 0) return 0.0;
  const Vector rx = propagate(chain.kernel(), x, k);
  const Vector ry = propagate(chain.kernel(), y, k);
  return pair_value(chain.space(), rx, ry, x, y);
}

std::optional<std::size_t> CurvatureProfile::pair_index(State x, State y) const {
  if (y < x) std::swap(x, y);
  const auto it = std::lower_bound(orbits.pairs.begin(), orbits.pairs.end(), StatePair{x, y});
  if (it == orbits.pairs.end() || *it != StatePair{x, y}) return std::nullopt;
  return static_cast<std::size_t>(it - orbits.pairs.begin());
}

double CurvatureProfile::pair_kappa(std::size_t index, unsigned k) const {
  return orbit_kappa(static_cast<Eigen::Index>(orbits.orbit_of.at(index)), static_cast<Eigen::Index>(k));
}

CurvatureProfile curvature_profile(const ChainSpec& chain, unsigned K, PairSelection selection) {
  if (K < 1) fail(ErrorCode::kInvalidArgument, "profile horizon K must be >= 1");
  const auto& space = chain.space();
  double eps = 0.0;
  if (selection.mode == PairSelection::Mode::kGeodesic) {
    const auto check = check_geodesic(space, selection.eps);
    if (!check.geodesic) {
      fail(ErrorCode::kNotGeodesic,
           "space is not " + std::to_string(selection.eps) + "-geodesic (witness " +
               std::to_string(check.witness->first) + ", " + std::to_string(check.witness->second) + ")");
    }
    eps = selection.eps;
  }
  CurvatureProfile prof;
  prof.selection = selection;
  prof.orbits = pair_orbits(enumerate_pairs(space, eps), chain.symmetries());
  const auto& orbits = prof.orbits;
  const std::size_t norbits = orbits.representative.size();
  prof.kappa.assign(K + 1, 1.0);
  prof.argmin.assign(K + 1, StatePair{0, 0});
  prof.orbit_kappa = Matrix::Zero(static_cast<Eigen::Index>(norbits), K + 1);

  if (norbits > 0) {
    // rows P^k_s for every state touched by a representative pair
    const std::size_t n = chain.size();
    std::vector<std::size_t> slot(n, n);
    std::vector<State> states;
    for (std::size_t r : orbits.representative) {
      for (State s : {orbits.pairs[r].first, orbits.pairs[r].second}) {
        if (slot[s] == n) {
          slot[s] = states.size();
          states.push_back(s);
        }
      }
    }
    std::vector<Vector> rows(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
      rows[i] = Vector::Zero(static_cast<Eigen::Index>(n));
      rows[i](static_cast<Eigen::Index>(states[i])) = 1.0;
    }
    prof.kappa[0] = 0.0;
    prof.argmin[0] = orbits.pairs[orbits.representative[0]];
    std::vector<double> values(norbits);
    for (unsigned k = 1; k <= K; ++k) {
      for (auto& r : rows) r = chain.kernel().step(r);
      std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
      for (std::size_t o = 0; o < norbits; ++o) {
        try {
          const auto [x, y] = orbits.pairs[orbits.representative[o]];
          values[o] = pair_value(space, rows[slot[x]], rows[slot[y]], x, y);
        } catch (...) {
#pragma omp critical
          error = std::current_exception();
        }
      }
      if (error) std::rethrow_exception(error);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t o = 0; o < norbits; ++o) {
        prof.orbit_kappa(static_cast<Eigen::Index>(o), k) = values[o];
        if (values[o] < best) {
          best = values[o];
          prof.argmin[k] = orbits.pairs[orbits.representative[o]];
        }
      }
      prof.kappa[k] = best;
    }
  }
  finish_profile(prof);
  return prof;
}

CurvatureProfile profile_from_values(std::vector<double> kappa) {
  if (kappa.empty()) fail(ErrorCode::kInvalidArgument, "profile needs at least kappa_0");
  for (double v : kappa) {
    if (!std::isfinite(v) || v > 1.0 + 1e-12) {
      fail(ErrorCode::kInvalidArgument, "profile values must be finite and <= 1");
    }
  }
  CurvatureProfile prof;
  prof.kappa = std::move(kappa);
  prof.argmin.assign(prof.kappa.size(), StatePair{0, 0});
  finish_profile(prof);
  return prof;
}

double kappa_k(const ChainSpec& chain, unsigned k, PairSelection selection) {
  if (k == 0) return chain.size() >= 2 ? 0.0 : 1.0;
  return curvature_profile(chain, k, selection).kappa[k];
}

double submultiplicativity_violation(const std::vector<double>& kappa) {
  double worst = -std::numeric_limits<double>::infinity();
  const std::size_t K = kappa.empty() ? 0 : kappa.size() - 1;
  for (std::size_t k = 0; k <= K; ++k) {
    for (std::size_t l = 0; k + l <= K; ++l) {
      worst = std::max(worst, (1.0 - kappa[k + l]) - (1.0 - kappa[k]) * (1.0 - kappa[l]));
    }
  }
  return kappa.empty() ? 0.0 : worst;
}

double kappa_sigma_c_bound(const CurvatureProfile& profile, unsigned k) {
  if (k < 1 || k > profile.K()) fail(ErrorCode::kInvalidArgument, "lag outside the profile");
  const double kk = profile.kappa[k];
  if (!(kk > 0.0)) {
    fail(ErrorCode::kNonPositiveKappa, "kappa_" + std::to_string(k) + " is not positive");
  }
  double head = 0.0;
  for (unsigned i = 0; i < k; ++i) head += 1.0 - profile.kappa[i];
  return std::min(head, k * profile.M) / kk;
}

double one_minus_kappa_bound(const CurvatureProfile& profile, unsigned long long i) {
  const unsigned K = profile.K();
  if (i <= K) return std::max(0.0, 1.0 - profile.kappa[i]);
  const auto u = one_minus(profile.kappa);
  double best = std::numeric_limits<double>::infinity();
  for (unsigned k = 1; k <= K; ++k) {
    const unsigned long long q = i / k;
    const unsigned long long r = i % k;
    best = std::min(best, std::pow(u[k], static_cast<double>(q)) * u[r]);
  }
  return best;
}

std::optional<unsigned> best_decay_lag(const CurvatureProfile& profile) {
  std::optional<unsigned> best;
  double rate = 1.0;
  for (unsigned k = 1; k <= profile.K(); ++k) {
    if (!(profile.kappa[k] > 0.0)) continue;
    const double r = std::pow(1.0 - profile.kappa[k], 1.0 / k);
    if (!best || r < rate) {
      best = k;
      rate = r;
    }
  }
  return best;
}

double kappa_sigma_c(const CurvatureProfile& profile) { return close_series(profile, 1, 0.0); }

double sum_squares(const CurvatureProfile& profile) { return close_series(profile, 2, 0.0); }

double exp_weighted_squares(const CurvatureProfile& profile, double c) {
  if (!(c >= 0.0)) fail(ErrorCode::kInvalidArgument, "exponential weight must be nonnegative");
  return close_series(profile, 2, c);
}

double pair_kappa_sigma_c(const CurvatureProfile& profile, std::size_t index) {
  const unsigned K = profile.K();
  double head = 0.0;
  for (unsigned i = 0; i <= K; ++i) head += std::max(0.0, 1.0 - profile.pair_kappa(index, i));
  const double tail_scale = std::max(0.0, 1.0 - profile.pair_kappa(index, K));
  return head + tail_scale * (kappa_sigma_c(profile) - (1.0 - profile.kappa[0]));
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> PairCouplingFamily::find(State x, State y) const {
  if (y < x) std::swap(x, y);
  const auto it = std::lower_bound(pairs.begin(), pairs.end(), StatePair{x, y});
  if (it == pairs.end() || *it != StatePair{x, y}) return std::nullopt;
  return static_cast<std::size_t>(it - pairs.begin());
}

PairCouplingFamily optimal_coupling_family(const ChainSpec& chain, std::vector<StatePair> pairs) {
  for (auto& [x, y] : pairs) {
    if (y < x) std::swap(x, y);
    if (x == y) fail(ErrorCode::kInvalidArgument, "coupling family pairs must be distinct states");
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  PairCouplingFamily fam;
  fam.couplings.resize(pairs.size());
  const auto& p = chain.kernel().matrix();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    fam.couplings[i] = optimal_coupling(row_measure(p, pairs[i].first), row_measure(p, pairs[i].second),
                                        chain.space());
  }
  fam.pairs = std::move(pairs);
  return fam;
}

std::vector<StatePair> close_pair_set(const ChainSpec& chain, std::vector<StatePair> seed) {
  std::vector<StatePair> out;
  std::unordered_map<std::uint64_t, bool> seen;
  auto key = [](State x, State y) {
    if (y < x) std::swap(x, y);
    return (static_cast<std::uint64_t>(x) << 32) | static_cast<std::uint64_t>(y);
  };
  std::vector<StatePair> todo;
  for (auto [x, y] : seed) {
    if (x == y) continue;
    if (seen.emplace(key(x, y), true).second) todo.emplace_back(std::min(x, y), std::max(x, y));
  }
  const auto& p = chain.kernel().matrix();
  while (!todo.empty()) {
    const StatePair pr = todo.back();
    todo.pop_back();
    out.push_back(pr);
    const Coupling c = optimal_coupling(row_measure(p, pr.first), row_measure(p, pr.second), chain.space());
    for (const auto& e : c.entries) {
      if (e.x == e.y || e.mass <= 0.0) continue;
      if (seen.emplace(key(e.x, e.y), true).second) todo.emplace_back(std::min(e.x, e.y), std::max(e.x, e.y));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double RecursiveBound::min_at(unsigned k) const {
  if (k < 1 || static_cast<Eigen::Index>(k) > lower.cols()) fail(ErrorCode::kInvalidArgument, "step outside the recursion");
  return lower.col(static_cast<Eigen::Index>(k) - 1).minCoeff();
}

RecursiveBound recursive_lower_bound(const ChainSpec& chain, const PairCouplingFamily& couplings,
                                     const std::vector<double>& kappa1_floor, unsigned K) {
  const std::size_t m = couplings.pairs.size();
  if (K < 1) fail(ErrorCode::kInvalidArgument, "recursion horizon K must be >= 1");
  if (couplings.couplings.size() != m || kappa1_floor.size() != m) {
    fail(ErrorCode::kInvalidArgument, "coupling family and floor sizes differ");
  }
  if (!std::is_sorted(couplings.pairs.begin(), couplings.pairs.end())) {
    fail(ErrorCode::kInvalidArgument, "coupling family pairs must be sorted");
  }
  const auto& space = chain.space();
  const auto& p = chain.kernel().matrix();
  struct Term {
    std::size_t pair;
    double weight;
  };
  std::vector<double> constant(m);
  std::vector<std::vector<Term>> terms(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto [x, y] = couplings.pairs[i];
    const Coupling& c = couplings.couplings[i];
    const Vector px = Vector(Matrix(p.row(static_cast<Eigen::Index>(x))).transpose());
    const Vector py = Vector(Matrix(p.row(static_cast<Eigen::Index>(y))).transpose());
    if (c.n != chain.size() || coupling_marginal_error(c, px, py) > 1e-10) {
      fail(ErrorCode::kInvalidArgument, "coupling " + std::to_string(i) + " does not couple P_x and P_y");
    }
    const double dxy = space(x, y);
    double expected = 0.0;
    for (const auto& e : c.entries) {
      const double d = space(e.x, e.y);
      expected += e.mass * d;
      if (e.x == e.y || e.mass <= 0.0) continue;
      const auto j = couplings.find(e.x, e.y);
      if (!j) {
        fail(ErrorCode::kIncompletePairSet, "coupling support pair (" + std::to_string(e.x) + ", " +
                                                std::to_string(e.y) + ") is not audited");
      }
      terms[i].push_back({*j, e.mass * d / dxy});
    }
    constant[i] = 1.0 - expected / dxy;
  }
  RecursiveBound out;
  out.pairs = couplings.pairs;
  out.lower.resize(static_cast<Eigen::Index>(m), K);
  for (std::size_t i = 0; i < m; ++i) out.lower(static_cast<Eigen::Index>(i), 0) = kappa1_floor[i];
  for (unsigned k = 1; k < K; ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      double v = constant[i];
      for (const Term& t : terms[i]) v += t.weight * out.lower(static_cast<Eigen::Index>(t.pair), k - 1);
      out.lower(static_cast<Eigen::Index>(i), k) = v;
    }
  }
  return out;
}

}  // namespace ricci
