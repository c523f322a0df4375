#pragma once

#include <limits>

#include "ricci/chain_geometry.hpp"
#include "ricci/curvature.hpp"

namespace ricci {

/// 2 exp(-t^2 / D) up to t_max, then 2 exp(-t_max^2 / D - lambda (t - t_max)).
/// t_max = inf gives a pure Gaussian certificate. D = 0 certifies a constant
/// observable: the bound is 2 at t = 0 and 0 beyond.
struct TailBound {
  double D = 0.0;
  double t_max = std::numeric_limits<double>::infinity();
  double lambda_max = std::numeric_limits<double>::infinity();
  double prefactor = 2.0;

  double operator()(double t) const;
};

/// Var_pi(f) <= (sum_k (1 - kappa_k)^2) E_pi(S) for 1-Lipschitz f.
double variance_bound(const CurvatureProfile& profile, const GeometrySummary& summary);

/// E_pi |f - E_pi f|^{2p} <= ((2p - 1) kappa_Sigma^c / 2)^p E_pi(hat sigma^{2p}).
double moment_bound_reversible(const ChainSpec& chain, const CurvatureProfile& profile,
                               const GeometrySummary& summary, double p);

/// Gaussian certificate with D = f_lip^2 kappa_Sigma^c hat sigma_max^2.
TailBound gaussian_tail_reversible(const ChainSpec& chain, const CurvatureProfile& profile,
                                   const GeometrySummary& summary, double f_lip);

struct BernsteinBound {
  double mean_V = 0.0;
  double V_lip = 0.0;
  double L = std::numeric_limits<double>::infinity();
  double f_lip = 1.0;

  double operator()(double t) const;
};

/// Checks V(x) >= sum_y kappa_Sigma^c(x, y) d(x, y)^2 P_x(y) (per-pair values
/// from the profile where audited, the global kappa_Sigma^c otherwise) and
/// returns the certificate 2 exp(-t^2 / (4 E V + 4 L^{-1/2} t)).
BernsteinBound bernstein_tail_reversible(const ChainSpec& chain, const CurvatureProfile& profile,
                                         const GeometrySummary& summary, const Vector& V, double f_lip);

/// Smallest admissible V: the domination sum itself.
Vector bernstein_minimal_V(const ChainSpec& chain, const CurvatureProfile& profile);

/// Non-reversible certificate: D_max = 2 f^2 S_max sum exp(2/3 (1 - kappa_i) f)(1 - kappa_i)^2,
/// t_max = D_max / (6 sigma_inf), lambda_max = 1 / (3 sigma_inf).
TailBound tail_nonreversible(const CurvatureProfile& profile, const GeometrySummary& summary, double f_lip);

/// Second non-reversible certificate at lag K with a dominating S.
TailBound tail_nonreversible2(const ChainSpec& chain, const CurvatureProfile& profile,
                              const GeometrySummary& summary, const Vector& S, double f_lip, unsigned K);

/// Throws InvalidS unless S(x) >= S_upper(x) at every state.
void check_dominating_S(const GeometrySummary& summary, const Vector& S);

}  // namespace ricci
