#include "ricci/chain_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "ricci/error.hpp"
#include "ricci/symmetry.hpp"

namespace ricci {

const Vector& GeometrySummary::jump(unsigned k) const {
  const auto it = J.find(k);
  if (it == J.end()) fail(ErrorCode::kInvalidArgument, "J_" + std::to_string(k) + " was not computed");
  return it->second;
}

double lipschitz_constant(const FiniteMetricSpace& space, const Vector& v) {
  const std::size_t n = space.size();
  if (static_cast<std::size_t>(v.size()) != n) fail(ErrorCode::kInvalidArgument, "vector does not match the space");
  double best = 0.0;
  for (State x = 0; x < n; ++x) {
    for (State y = x + 1; y < n; ++y) {
      best = std::max(best, std::abs(v(static_cast<Eigen::Index>(x)) - v(static_cast<Eigen::Index>(y))) / space(x, y));
    }
  }
  return best;
}

double expectation(const Distribution& pi, const Vector& v) { return pi.weights().dot(v); }

GeometrySummary geometry(const ChainSpec& chain, const std::vector<unsigned>& k_list,
                         bool exact_local_dimension) {
  const auto& space = chain.space();
  const auto& p = chain.kernel().matrix();
  const auto n = static_cast<Eigen::Index>(chain.size());
  GeometrySummary g;
  g.exact_local_dimension = exact_local_dimension;
  g.sigma.resize(n);
  g.sigma_hat.resize(n);
  g.sigma_inf.resize(n);
  g.S_upper.resize(n);
  g.n_lower.resize(n);

  const StateOrbits orbits = state_orbits(chain.size(), chain.symmetries());
  std::vector<double> exact_var(orbits.representative.size(), -1.0);
  if (exact_local_dimension) {
    for (std::size_t o = 0; o < orbits.representative.size(); ++o) {
      const Measure px = row_measure(p, orbits.representative[o]);
      if (px.size() <= kExactSupportLimit) exact_var[o] = max_lipschitz_variance(space, px);
    }
  }

  for (Eigen::Index x = 0; x < n; ++x) {
    const Measure px = row_measure(p, static_cast<State>(x));
    double s2 = 0.0;
    double h2 = 0.0;
    double spread = 0.0;
    for (std::size_t i = 0; i < px.size(); ++i) {
      const double dxy = space(static_cast<State>(x), px[i].first);
      h2 += dxy * dxy * px[i].second;
      for (std::size_t j = i + 1; j < px.size(); ++j) {
        const double d = space(px[i].first, px[j].first);
        s2 += d * d * px[i].second * px[j].second;  // half of the symmetric double sum
        spread = std::max(spread, d);
      }
    }
    g.sigma(x) = std::sqrt(s2);
    g.sigma_hat(x) = std::sqrt(h2);
    g.sigma_inf(x) = 0.5 * spread;
    double S = std::min(s2, g.sigma_inf(x) * g.sigma_inf(x));
    const double ev = exact_var[orbits.orbit_of[static_cast<std::size_t>(x)]];
    if (ev >= 0.0) S = std::min(S, ev);
    g.S_upper(x) = S;
    g.n_lower(x) = S > 0.0 ? std::max(1.0, s2 / S) : 1.0;
  }

  const Vector& w = chain.pi().weights();
  g.sigma_avg = std::sqrt(w.dot(g.sigma.cwiseAbs2()));
  g.sigma_hat_avg = std::sqrt(w.dot(g.sigma_hat.cwiseAbs2()));
  g.sigma_inf_max = g.sigma_inf.maxCoeff();
  g.sigma_max = g.sigma.maxCoeff();
  g.sigma_hat_max = g.sigma_hat.maxCoeff();
  g.S_max = g.S_upper.maxCoeff();
  g.S_mean = w.dot(g.S_upper);
  g.S_lip = lipschitz_constant(space, g.S_upper);
  g.ecc = space.distances() * w;

  // J_k is constant on state orbits; propagate representative rows only.
  std::set<unsigned> ks(k_list.begin(), k_list.end());
  ks.insert(0);
  ks.insert(1);
  for (unsigned k : ks) g.J[k] = Vector::Zero(n);
  for (std::size_t o = 0; o < orbits.representative.size(); ++o) {
    const State x = orbits.representative[o];
    Vector row = Vector::Zero(n);
    row(static_cast<Eigen::Index>(x)) = 1.0;
    const Vector dist_x = space.distances().row(static_cast<Eigen::Index>(x)).transpose();
    unsigned at = 0;
    std::vector<double> jx;
    for (unsigned k : ks) {
      for (; at < k; ++at) row = chain.kernel().step(row);
      jx.push_back(row.dot(dist_x));
    }
    for (Eigen::Index y = 0; y < n; ++y) {
      if (orbits.orbit_of[static_cast<std::size_t>(y)] != o) continue;
      std::size_t i = 0;
      for (unsigned k : ks) g.J[k](y) = jx[i++];
    }
  }
  return g;
}

unsigned mixing_time_bound(const CurvatureProfile& profile, const FiniteMetricSpace& space, double eps) {
  if (!(space.d0() > 0.0)) fail(ErrorCode::kInvalidArgument, "mixing bound needs d0 > 0");
  const double target = eps * space.d0() / space.diam();
  for (unsigned k = 0; k <= profile.K(); ++k) {
    if (1.0 - profile.kappa[k] <= target) return k;
  }
  fail(ErrorCode::kUnbounded, "1 - kappa_k stays above eps d0 / diam up to K = " + std::to_string(profile.K()));
}

KappaFromMixing kappa_from_mixing(unsigned t_half, double eps, double d0, double diam) {
  if (!(d0 > 0.0)) fail(ErrorCode::kInvalidArgument, "d0 must be positive");
  return {t_half, 1.0 - eps * diam / d0};
}

GapBound spectral_gap_bound(const ChainSpec& chain, const CurvatureProfile& profile) {
  if (!chain.reversible()) fail(ErrorCode::kNotReversible, "absolute gap bound needs a reversible chain");
  GapBound out;
  const unsigned K = profile.K();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.per_lag.assign(K + 1, nan);
  out.linear.assign(K + 1, nan);
  bool any = false;
  for (unsigned k = 1; k <= K; ++k) {
    const double kk = profile.kappa[k];
    if (!(kk > 0.0)) continue;
    out.linear[k] = kk / k;
    // the k-th root amplifies rounding in 1 - kappa_k once it is tiny
    if (k > 1 && 1.0 - kk < kGapRootResolution) continue;
    out.per_lag[k] = 1.0 - std::pow(1.0 - kk, 1.0 / k);
    if (!any || out.per_lag[k] > out.value) {
      out.value = out.per_lag[k];
      out.k = k;
    }
    any = true;
  }
  if (!any) fail(ErrorCode::kNoPositiveKappa, "no kappa_k > 0 within the profile horizon");
  return out;
}

GapBound pseudo_spectral_gap_bound(const CurvatureProfile& profile,
                                   const CurvatureProfile& reversed_profile) {
  if (profile.K() != reversed_profile.K()) {
    fail(ErrorCode::kInvalidArgument, "profiles of P and P* must share the horizon");
  }
  GapBound out;
  const unsigned K = profile.K();
  out.per_lag.assign(K + 1, std::numeric_limits<double>::quiet_NaN());
  bool any = false;
  for (unsigned k = 1; k <= K; ++k) {
    const double v = (1.0 - (1.0 - reversed_profile.kappa[k]) * (1.0 - profile.kappa[k])) / k;
    if (!(v > 0.0)) continue;
    out.per_lag[k] = v;
    if (!any || v > out.value) {
      out.value = v;
      out.k = k;
    }
    any = true;
  }
  if (!any) fail(ErrorCode::kNoPositiveKappa, "no lag gives a positive pseudo-gap bound");
  return out;
}

DiameterBounds bonnet_myers(const GeometrySummary& summary, const CurvatureProfile& profile, unsigned k) {
  if (k < 1 || k > profile.K()) fail(ErrorCode::kInvalidArgument, "lag outside the profile");
  const double kk = profile.kappa[k];
  if (!(kk > 0.0)) fail(ErrorCode::kNonPositiveKappa, "kappa_" + std::to_string(k) + " is not positive");
  const Vector& jk = summary.jump(k);
  DiameterBounds b;
  b.k = k;
  b.kappa = kk;
  b.diam = 2.0 * jk.maxCoeff() / kk;
  b.diam_via_J1 = 2.0 * k * summary.jump(1).maxCoeff() / kk;
  b.ecc = jk / kk;
  b.mean_distance = 2.0 * jk.minCoeff() / kk;
  return b;
}

double pair_distance_bound(const GeometrySummary& summary, const CurvatureProfile& profile,
                           State x, State y, unsigned k) {
  const auto idx = profile.pair_index(x, y);
  if (!idx) fail(ErrorCode::kInvalidArgument, "pair is not in the profile");
  const double kxy = profile.pair_kappa(*idx, k);
  if (!(kxy > 0.0)) fail(ErrorCode::kNonPositiveKappa, "kappa_k(x, y) is not positive");
  const Vector& jk = summary.jump(k);
  return (jk(static_cast<Eigen::Index>(x)) + jk(static_cast<Eigen::Index>(y))) / kxy;
}

}  // namespace ricci
