#pragma once

#include <cstdint>
#include <string>

#include "ricci/metric_markov.hpp"

namespace ricci {

/// Binary spins on N sites with pair couplings:
/// H(w) = sum_{i<j} J_ij w_i w_j + sum_i h_i w_i, pi(w) ~ exp(H(w)).
/// Configurations are bitmasks; bit i set means w_i = +1.
struct SpinModel {
  std::size_t N = 0;
  Matrix J;  // symmetric, zero diagonal
  Vector h;
  double beta = 0.0;   // model-level parameters, for reporting
  double field = 0.0;

  double energy(std::uint64_t config) const;
  /// P(w_i = +1 | rest of config).
  double conditional_plus(std::size_t i, std::uint64_t config) const;
};

inline constexpr std::size_t kExactDobrushinSites = 20;

enum class NormKind { kColumn, kRow };

/// Induced 1-norm: maximum column sum (default) or maximum row sum.
double norm1(const Matrix& m, NormKind kind = NormKind::kColumn);

/// Spectral radius of |A| (largest eigenvalue modulus).
double spectral_radius(const Matrix& A);

struct DobrushinData {
  Matrix A;
  Matrix B;                 // systemic-scan matrix B_N ... B_1
  double norm1 = 0.0;       // column convention
  double norm1_row = 0.0;
  double spectral_radius = 0.0;
  bool dobrushin_condition = false;      // norm1 < 1
  bool dobrushin_condition_row = false;  // norm1_row < 1
  double beta = 0.0;
  double h = 0.0;
  double x = 0.0;    // beta / N
  double rho = 0.0;  // 1 / (1 + e^{-4 beta})
};

/// Exact mode enumerates all configurations: a_ij = max |p_i(w) - p_i(w^j)|.
/// Otherwise a_ij = tanh |J_ij|, the worst case over external fields.
DobrushinData estimate_dobrushin(const SpinModel& model, bool exact);

/// Wraps a given A (checks nonnegativity and zero diagonal).
DobrushinData dobrushin_from_matrix(Matrix A, double beta = 0.0, double h = 0.0);

struct RandomScanBound {
  double kappa_lower = 0.0;  // 1 - ||((N-1)/N I + A/N)^k||
  double gap_lower = 0.0;    // (1 - sp(A)) / N
  double spectral_radius = 0.0;
};

RandomScanBound random_scan_bound(const Matrix& A, unsigned k, NormKind kind = NormKind::kColumn);

/// B = B_N ... B_1 where B_i is the identity with row i replaced by row i of A.
Matrix systemic_scan_matrix(const Matrix& A);

/// 1 - ||B^k||.
double systemic_scan_bound(const Matrix& B, unsigned k, NormKind kind = NormKind::kColumn);

Matrix matrix_power(const Matrix& m, unsigned k);

struct CurieWeissClosedForms {
  std::size_t N = 0;
  double beta = 0.0;
  double x = 0.0;
  double kappa_random = 0.0;        // (1 - beta (N-1)/N) / N
  double kappa_systemic = 0.0;      // 2 - e^beta
  double gamma_ps_systemic = 0.0;   // (1 - beta (N-1)/N) / 4
  double norm_B = 0.0;              // numeric ||B||_1
  double norm_B_closed = 0.0;       // (1+x)^N - 1 - x
  double max_entry_error = 0.0;     // B entries vs their closed forms
  double max_column_sum_error = 0.0;
  double v_lemma_violation = 0.0;   // max_i (vB)_i - v_i beta (N-1)/N
  Matrix A;
  Matrix B;

  /// 1 - beta e^beta (beta (N-1)/N)^{k-1}.
  double kappa_systemic_k(unsigned k) const;
};

CurieWeissClosedForms curie_weiss_closed_forms(std::size_t N, double beta);

/// Curie-Weiss interdependence matrix: beta / N off the diagonal.
Matrix curie_weiss_A(std::size_t N, double beta);

struct Ising1dClosedForms {
  std::size_t N = 0;
  double beta = 0.0;
  double h = 0.0;
  double rho = 0.0;
  double off_diagonal = 0.0;        // entry of the tridiagonal A
  double norm_A = 0.0;              // 2 rho - 1 at h = 0
  double kappa_random = 0.0;        // (2/N)(1 - rho)
  double kappa_systemic = 0.0;      // 2(1 - rho)/(3/2 - rho)
  double gamma_ps_systemic = 0.0;   // 2(1 - rho)/(3/2 - rho)^2
  double norm_B = 0.0;
  double norm_B_claim = 0.0;        // (rho - 1/2)/(3/2 - rho)
  bool norm_B_holds = false;
  Matrix A;
  Matrix B;
};

Ising1dClosedForms ising1d_closed_forms(std::size_t N, double beta, double h);

}  // namespace ricci
