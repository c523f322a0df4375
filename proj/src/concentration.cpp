#include "ricci/concentration.hpp"

#include <algorithm>
#include <cmath>

#include "ricci/error.hpp"

namespace ricci {

double TailBound::operator()(double t) const {
  if (t < 0.0) fail(ErrorCode::kInvalidArgument, "tail bound needs t >= 0");
  if (D == 0.0) return t > 0.0 ? 0.0 : prefactor;
  if (t <= t_max) return prefactor * std::exp(-t * t / D);
  return prefactor * std::exp(-t_max * t_max / D - lambda_max * (t - t_max));
}

double variance_bound(const CurvatureProfile& profile, const GeometrySummary& summary) {
  return sum_squares(profile) * summary.S_mean;
}

double moment_bound_reversible(const ChainSpec& chain, const CurvatureProfile& profile,
                               const GeometrySummary& summary, double p) {
  if (!chain.reversible()) fail(ErrorCode::kNotReversible, "moment bound needs a reversible chain");
  if (!(p >= 1.0)) fail(ErrorCode::kInvalidArgument, "moment order p must be >= 1");
  const double ks = kappa_sigma_c(profile);
  const Vector moments = summary.sigma_hat.array().pow(2.0 * p).matrix();
  return std::pow((2.0 * p - 1.0) * ks / 2.0, p) * expectation(chain.pi(), moments);
}

TailBound gaussian_tail_reversible(const ChainSpec& chain, const CurvatureProfile& profile,
                                   const GeometrySummary& summary, double f_lip) {
  if (!chain.reversible()) fail(ErrorCode::kNotReversible, "Gaussian bound needs a reversible chain");
  if (!(f_lip >= 0.0)) fail(ErrorCode::kInvalidArgument, "Lipschitz coefficient must be >= 0");
  TailBound b;
  b.D = f_lip * f_lip * kappa_sigma_c(profile) * summary.sigma_hat_max * summary.sigma_hat_max;
  return b;
}

double BernsteinBound::operator()(double t) const {
  if (t < 0.0) fail(ErrorCode::kInvalidArgument, "tail bound needs t >= 0");
  if (f_lip == 0.0) return t > 0.0 ? 0.0 : 2.0;
  const double s = t / f_lip;
  const double inv_sqrt_L = std::isinf(L) ? 0.0 : 1.0 / std::sqrt(L);
  const double denom = 4.0 * mean_V + 4.0 * inv_sqrt_L * s;
  if (denom == 0.0) return s > 0.0 ? 0.0 : 2.0;
  return 2.0 * std::exp(-s * s / denom);
}

Vector bernstein_minimal_V(const ChainSpec& chain, const CurvatureProfile& profile) {
  const double global = kappa_sigma_c(profile);
  const auto& space = chain.space();
  const auto& p = chain.kernel().matrix();
  Vector need = Vector::Zero(p.rows());
  for (Eigen::Index x = 0; x < p.outerSize(); ++x) {
    for (SparseMatrix::InnerIterator it(p, x); it; ++it) {
      const auto y = static_cast<State>(it.col());
      if (y == static_cast<State>(x)) continue;
      double ks = global;
      if (const auto idx = profile.pair_index(static_cast<State>(x), y)) {
        ks = std::min(global, pair_kappa_sigma_c(profile, *idx));
      }
      const double d = space(static_cast<State>(x), y);
      need(x) += ks * d * d * it.value();
    }
  }
  return need;
}

BernsteinBound bernstein_tail_reversible(const ChainSpec& chain, const CurvatureProfile& profile,
                                         const GeometrySummary& summary, const Vector& V, double f_lip) {
  if (!chain.reversible()) fail(ErrorCode::kNotReversible, "Bernstein bound needs a reversible chain");
  if (static_cast<std::size_t>(V.size()) != chain.size()) fail(ErrorCode::kInvalidV, "V has the wrong length");
  if (!(f_lip >= 0.0)) fail(ErrorCode::kInvalidArgument, "Lipschitz coefficient must be >= 0");
  const Vector need = bernstein_minimal_V(chain, profile);
  for (Eigen::Index x = 0; x < V.size(); ++x) {
    if (!std::isfinite(V(x)) || V(x) < 0.0 || V(x) < need(x) - 1e-12 * std::max(1.0, need(x))) {
      fail(ErrorCode::kInvalidV, "V does not dominate the curvature-weighted jump at state " +
                                     std::to_string(x));
    }
  }
  BernsteinBound b;
  b.f_lip = f_lip;
  b.mean_V = expectation(chain.pi(), V);
  b.V_lip = lipschitz_constant(chain.space(), V);
  const double ks = kappa_sigma_c(profile);
  const double denom = b.V_lip * b.V_lip * summary.sigma_hat_max * summary.sigma_hat_max * ks;
  b.L = denom > 0.0 ? 8.0 * b.mean_V / denom : std::numeric_limits<double>::infinity();
  return b;
}

TailBound tail_nonreversible(const CurvatureProfile& profile, const GeometrySummary& summary, double f_lip) {
  if (!(f_lip >= 0.0)) fail(ErrorCode::kInvalidArgument, "Lipschitz coefficient must be >= 0");
  const double series = exp_weighted_squares(profile, 2.0 / 3.0 * f_lip);
  if (!(summary.sigma_inf_max > 0.0)) {
    fail(ErrorCode::kZeroGranularity, "granularity sigma_inf is zero");
  }
  TailBound b;
  b.D = 2.0 * f_lip * f_lip * summary.S_max * series;
  b.t_max = b.D / (6.0 * summary.sigma_inf_max);
  b.lambda_max = 1.0 / (3.0 * summary.sigma_inf_max);
  return b;
}

void check_dominating_S(const GeometrySummary& summary, const Vector& S) {
  if (S.size() != summary.S_upper.size()) fail(ErrorCode::kInvalidS, "S has the wrong length");
  for (Eigen::Index x = 0; x < S.size(); ++x) {
    if (!std::isfinite(S(x)) || S(x) < summary.S_upper(x) - 1e-12) {
      fail(ErrorCode::kInvalidS, "S does not dominate sigma^2 / n at state " + std::to_string(x));
    }
  }
}

TailBound tail_nonreversible2(const ChainSpec& chain, const CurvatureProfile& profile,
                              const GeometrySummary& summary, const Vector& S, double f_lip, unsigned K) {
  if (K < 1 || K > profile.K()) fail(ErrorCode::kInvalidArgument, "lag K outside the profile");
  const double kK = profile.kappa[K];
  if (!(kK > 0.0)) fail(ErrorCode::kNonPositiveKappa, "kappa_K is not positive");
  check_dominating_S(summary, S);
  if (!(f_lip >= 0.0)) fail(ErrorCode::kInvalidArgument, "Lipschitz coefficient must be >= 0");
  TailBound b;
  if (f_lip == 0.0) return TailBound{0.0, 0.0, std::numeric_limits<double>::infinity(), 2.0};
  const double M = profile.M;
  const double mean_S = expectation(chain.pi(), S);
  const double S_lip = lipschitz_constant(chain.space(), S);
  b.D = f_lip * f_lip * mean_S * 16.0 * M * M * K / (kK - kK * kK / 4.0);
  const double inf = std::numeric_limits<double>::infinity();
  const double l1 = summary.sigma_inf_max > 0.0 ? 1.0 / (6.0 * M * summary.sigma_inf_max * f_lip) : inf;
  const double l2 = S_lip > 0.0 ? kK / (4.0 * K * M * M * S_lip * f_lip) : inf;
  b.lambda_max = std::min(l1, l2);
  b.t_max = b.D * b.lambda_max / 2.0;
  if (std::isnan(b.t_max)) b.t_max = inf;
  return b;
}

}  // namespace ricci
