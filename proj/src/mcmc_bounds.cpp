#include "ricci/mcmc_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ricci/error.hpp"
#include "ricci/transport.hpp"

namespace ricci {

namespace {

double head_squares(const CurvatureProfile& profile, unsigned K) {
  double s = 0.0;
  for (unsigned i = 0; i < K; ++i) s += (1.0 - profile.kappa[i]) * (1.0 - profile.kappa[i]);
  return s;
}

double positive_kappa(const CurvatureProfile& profile, unsigned K) {
  if (K < 1 || K > profile.K()) fail(ErrorCode::kInvalidArgument, "lag K outside the profile");
  const double kK = profile.kappa[K];
  if (!(kK > 0.0)) fail(ErrorCode::kNonPositiveKappa, "kappa_" + std::to_string(K) + " is not positive");
  return kK;
}

// base^exponent with 0^negative = inf.
double power(double base, double exponent) {
  if (base == 0.0 && exponent < 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(base, exponent);
}

Vector resolve_S(const GeometrySummary& summary, const std::optional<Vector>& S) {
  if (!S) return summary.S_upper;
  check_dominating_S(summary, *S);
  return *S;
}

}  // namespace

McmcPlan make_plan(std::shared_ptr<const ChainSpec> chain, Distribution q, std::size_t N,
                   std::size_t t0, unsigned K, double f_lip, const CurvatureProfile& profile) {
  if (!chain) fail(ErrorCode::kInvalidArgument, "plan needs a chain");
  if (!(t0 < N)) fail(ErrorCode::kInvalidArgument, "plan needs 0 <= t0 < N");
  if (q.size() != chain->size()) fail(ErrorCode::kInvalidArgument, "initial distribution has the wrong length");
  if (!(f_lip >= 0.0)) fail(ErrorCode::kInvalidArgument, "Lipschitz coefficient must be >= 0");
  positive_kappa(profile, K);
  const double w = w1(q, chain->pi(), chain->space());
  return McmcPlan{std::move(chain), std::move(q), N, t0, K, f_lip, w};
}

double bias_bound(const McmcPlan& plan, const CurvatureProfile& profile) {
  if (plan.w1_q_pi == 0.0 || plan.f_lip == 0.0) return 0.0;
  const double u = one_minus_kappa_bound(profile, plan.t0 + 1ULL);
  return u * kappa_sigma_c(profile) / static_cast<double>(plan.N - plan.t0) * plan.w1_q_pi * plan.f_lip;
}

double mcmc_variance_bound(const McmcPlan& plan, const CurvatureProfile& profile,
                           const GeometrySummary& summary, const std::optional<Vector>& S) {
  const unsigned K = plan.K;
  const double kK = positive_kappa(profile, K);
  const Vector s = resolve_S(summary, S);
  const double f2 = plan.f_lip * plan.f_lip;
  const double n = static_cast<double>(plan.N - plan.t0);
  const double M = profile.M;
  const double mean_S = expectation(plan.chain->pi(), s);
  const double burn = plan.t0 > 0 ? K * M * M / (kK * n) : 0.0;
  double v = f2 * head_squares(profile, K) / n * K / (kK * kK) * mean_S * (1.0 + burn);
  const double S_lip = lipschitz_constant(plan.chain->space(), s);
  const double coeff = f2 * S_lip * plan.w1_q_pi;
  if (coeff > 0.0) {
    v += coeff * M * M * M * 2.0 * K * K / kK *
         power(1.0 - kK, static_cast<double>(plan.t0) / K - 3.0);
  }
  return v;
}

unsigned best_variance_lag(const McmcPlan& plan, const CurvatureProfile& profile,
                           const GeometrySummary& summary) {
  unsigned best = 0;
  double value = std::numeric_limits<double>::infinity();
  McmcPlan trial = plan;
  for (unsigned K = 1; K <= profile.K(); ++K) {
    if (!(profile.kappa[K] > 0.0)) continue;
    trial.K = K;
    const double v = mcmc_variance_bound(trial, profile, summary);
    if (best == 0 || v < value) {
      best = K;
      value = v;
    }
  }
  if (best == 0) fail(ErrorCode::kNoPositiveKappa, "no kappa_K > 0 within the profile horizon");
  return best;
}

TailBound mcmc_tail_bound(const McmcPlan& plan, const CurvatureProfile& profile,
                          const GeometrySummary& summary) {
  const unsigned K = plan.K;
  const double kK = positive_kappa(profile, K);
  const double sinf = summary.sigma_inf_max;
  if (!(sinf > 0.0)) fail(ErrorCode::kZeroGranularity, "granularity sigma_inf is zero");
  const double f = plan.f_lip;
  if (f == 0.0) return TailBound{0.0, 0.0, std::numeric_limits<double>::infinity(), 2.0};
  const double M = profile.M;
  const double n = static_cast<double>(plan.N - plan.t0);
  const double span = (n + K - 1.0) + (plan.t0 > 0 ? K / kK : 0.0);
  const double sq = head_squares(profile, K);
  const double e6 = std::exp(1.0 / 6.0);
  TailBound b;
  b.lambda_max = kK * n / (12.0 * M * K * sinf * f);
  b.t_max = e6 * f * span / n * sq / (12.0 * M * sinf * kK);
  b.D = 2.0 * e6 * f * f * summary.S_max * span / (n * n) * K / (kK * kK) * sq;
  return b;
}

TailBound mcmc_tail_bound2(const McmcPlan& plan, const CurvatureProfile& profile,
                           const GeometrySummary& summary, const std::optional<Vector>& S) {
  const unsigned K = plan.K;
  const double kK = positive_kappa(profile, K);
  const Vector s = resolve_S(summary, S);
  const double f = plan.f_lip;
  const double inf = std::numeric_limits<double>::infinity();
  if (f == 0.0) return TailBound{0.0, 0.0, inf, 2.0};
  const double M = profile.M;
  const double n = static_cast<double>(plan.N - plan.t0);
  const double mean_S = expectation(plan.chain->pi(), s);
  const double S_lip = lipschitz_constant(plan.chain->space(), s);
  const double sinf = summary.sigma_inf_max;
  const double m1 = sinf > 0.0 ? 1.0 / (3.0 * sinf) : inf;
  const double m2 = S_lip > 0.0 ? kK / (4.0 * K * M * M * S_lip) : inf;
  const double m = std::min(m1, m2);
  double bracket = mean_S * (1.0 + (plan.t0 > 0 ? 2.0 * K / (n * kK) : 0.0));
  const double coeff = M * S_lip * plan.w1_q_pi;
  if (coeff > 0.0) {
    const double blocks = std::floor(static_cast<double>(plan.t0) / K);
    bracket += coeff * 3.0 * K / (n * kK) * power(1.0 - kK / 2.0, blocks - 3.0);
  }
  TailBound b;
  b.D = 64.0 * M * M * f * f * K * K / (kK * kK * n) * bracket;
  b.lambda_max = kK * n / (4.0 * K * M * f) * m;
  b.t_max = m * 8.0 * M * f * K * mean_S / kK;
  if (std::isnan(b.t_max)) b.t_max = inf;
  return b;
}

}  // namespace ricci
