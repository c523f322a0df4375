#include "ricci/dobrushin_glauber.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "ricci/error.hpp"

namespace ricci {

namespace {

double spin(std::uint64_t config, std::size_t i) { return ((config >> i) & 1U) != 0U ? 1.0 : -1.0; }

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_square(const Matrix& A) {
  if (A.rows() != A.cols()) fail(ErrorCode::kInvalidArgument, "interdependence matrix must be square");
}

}  // namespace

double SpinModel::energy(std::uint64_t config) const {
  double e = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double si = spin(config, i);
    e += h(static_cast<Eigen::Index>(i)) * si;
    for (std::size_t j = i + 1; j < N; ++j) e += J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * si * spin(config, j);
  }
  return e;
}

double SpinModel::conditional_plus(std::size_t i, std::uint64_t config) const {
  const auto ii = static_cast<Eigen::Index>(i);
  double m = h(ii);
  for (std::size_t j = 0; j < N; ++j) {
    if (j != i) m += J(ii, static_cast<Eigen::Index>(j)) * spin(config, j);
  }
  return logistic(2.0 * m);
}

double norm1(const Matrix& m, NormKind kind) {
  if (m.size() == 0) return 0.0;
  if (kind == NormKind::kColumn) return m.cwiseAbs().colwise().sum().maxCoeff();
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

Matrix matrix_power(const Matrix& m, unsigned k) {
  Matrix result = Matrix::Identity(m.rows(), m.cols());
  Matrix base = m;
  while (k > 0) {
    if ((k & 1U) != 0U) result = result * base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

double spectral_radius(const Matrix& A) {
  check_square(A);
  if (A.rows() == 0) return 0.0;
  const Matrix M = A.cwiseAbs();
  return Eigen::EigenSolver<Matrix>(M, false).eigenvalues().cwiseAbs().maxCoeff();
}

DobrushinData dobrushin_from_matrix(Matrix A, double beta, double h) {
  check_square(A);
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    if (A(i, i) != 0.0) fail(ErrorCode::kInvalidArgument, "interdependence matrix needs a zero diagonal");
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (!std::isfinite(A(i, j)) || A(i, j) < 0.0) {
        fail(ErrorCode::kInvalidArgument, "interdependence matrix must be finite and nonnegative");
      }
    }
  }
  DobrushinData d;
  d.A = std::move(A);
  d.B = systemic_scan_matrix(d.A);
  d.norm1 = norm1(d.A, NormKind::kColumn);
  d.norm1_row = norm1(d.A, NormKind::kRow);
  d.spectral_radius = spectral_radius(d.A);
  d.dobrushin_condition = d.norm1 < 1.0;
  d.dobrushin_condition_row = d.norm1_row < 1.0;
  d.beta = beta;
  d.h = h;
  d.x = d.A.rows() > 0 ? beta / static_cast<double>(d.A.rows()) : 0.0;
  d.rho = 1.0 / (1.0 + std::exp(-4.0 * beta));
  return d;
}

DobrushinData estimate_dobrushin(const SpinModel& model, bool exact) {
  const std::size_t N = model.N;
  if (model.J.rows() != static_cast<Eigen::Index>(N) || model.J.cols() != static_cast<Eigen::Index>(N) ||
      model.h.size() != static_cast<Eigen::Index>(N)) {
    fail(ErrorCode::kInvalidArgument, "spin model dimensions disagree");
  }
  Matrix A = Matrix::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  if (!exact) {
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < N; ++j) {
        if (i != j) A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::tanh(std::abs(model.J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
      }
    }
    return dobrushin_from_matrix(std::move(A), model.beta, model.field);
  }
  if (N > kExactDobrushinSites) {
    fail(ErrorCode::kTooLarge, "exact Dobrushin enumeration is capped at " +
                                   std::to_string(kExactDobrushinSites) + " sites");
  }
  const std::uint64_t count = std::uint64_t{1} << N;
  for (std::size_t i = 0; i < N; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (std::uint64_t c = 0; c < count; ++c) {
      // p_i ignores spin i; visit each configuration once with bit i clear.
      if (((c >> i) & 1U) != 0U) continue;
      double m = model.h(ii);
      for (std::size_t j = 0; j < N; ++j) {
        if (j != i) m += model.J(ii, static_cast<Eigen::Index>(j)) * spin(c, j);
      }
      const double p = logistic(2.0 * m);
      for (std::size_t j = 0; j < N; ++j) {
        if (j == i) continue;
        const auto jj = static_cast<Eigen::Index>(j);
        const double flipped = logistic(2.0 * (m - 2.0 * model.J(ii, jj) * spin(c, j)));
        A(ii, jj) = std::max(A(ii, jj), std::abs(p - flipped));
      }
    }
  }
  return dobrushin_from_matrix(std::move(A), model.beta, model.field);
}

RandomScanBound random_scan_bound(const Matrix& A, unsigned k, NormKind kind) {
  check_square(A);
  if (k < 1) fail(ErrorCode::kInvalidArgument, "random-scan bound needs k >= 1");
  const Eigen::Index n = A.rows();
  RandomScanBound r;
  if (n == 0) return r;
  const double N = static_cast<double>(n);
  const Matrix step = (N - 1.0) / N * Matrix::Identity(n, n) + A / N;
  r.kappa_lower = 1.0 - norm1(matrix_power(step, k), kind);
  r.spectral_radius = spectral_radius(A);
  r.gap_lower = (1.0 - r.spectral_radius) / N;
  return r;
}

Matrix systemic_scan_matrix(const Matrix& A) {
  check_square(A);
  const Eigen::Index n = A.rows();
  Matrix C = Matrix::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::RowVectorXd row = A.row(i) * C;
    C.row(i) = row;
  }
  return C;
}

double systemic_scan_bound(const Matrix& B, unsigned k, NormKind kind) {
  check_square(B);
  return 1.0 - norm1(matrix_power(B, k), kind);
}

// ===========================================================================
// Curie-Weiss

Matrix curie_weiss_A(std::size_t N, double beta) {
  const auto n = static_cast<Eigen::Index>(N);
  Matrix A = Matrix::Constant(n, n, beta / static_cast<double>(N));
  A.diagonal().setZero();
  return A;
}

double CurieWeissClosedForms::kappa_systemic_k(unsigned k) const {
  if (k < 1) fail(ErrorCode::kInvalidArgument, "k must be >= 1");
  const double r = beta * static_cast<double>(N - 1) / static_cast<double>(N);
  return 1.0 - beta * std::exp(beta) * std::pow(r, static_cast<double>(k - 1));
}

CurieWeissClosedForms curie_weiss_closed_forms(std::size_t N, double beta) {
  if (N < 2) fail(ErrorCode::kInvalidArgument, "Curie-Weiss needs N >= 2");
  if (!(beta > 0.0)) fail(ErrorCode::kInvalidArgument, "Curie-Weiss closed forms need beta > 0");
  CurieWeissClosedForms cw;
  cw.N = N;
  cw.beta = beta;
  const double n = static_cast<double>(N);
  const double x = beta / n;
  cw.x = x;
  const double r = beta * (n - 1.0) / n;
  cw.kappa_random = (1.0 - r) / n;
  cw.kappa_systemic = 2.0 - std::exp(beta);
  cw.gamma_ps_systemic = (1.0 - r) / 4.0;
  cw.A = curie_weiss_A(N, beta);
  cw.B = systemic_scan_matrix(cw.A);
  cw.norm_B = norm1(cw.B);
  cw.norm_B_closed = std::pow(1.0 + x, n) - 1.0 - x;

  // Entries with 1-based indices: b_{i,j} = x(1+x)^{i-1} for j > i and
  // b_{i+k,i} = x((1+x)^{i+k-1} - (1+x)^k) for k >= 0.
  for (std::size_t i = 1; i <= N; ++i) {
    for (std::size_t j = 1; j <= N; ++j) {
      double expected = 0.0;
      if (j > i) {
        expected = x * std::pow(1.0 + x, static_cast<double>(i - 1));
      } else {
        const double k = static_cast<double>(i - j);
        expected = x * (std::pow(1.0 + x, static_cast<double>(i - 1)) - std::pow(1.0 + x, k));
      }
      const double got = cw.B(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1));
      cw.max_entry_error = std::max(cw.max_entry_error, std::abs(got - expected));
    }
    const double col = cw.B.col(static_cast<Eigen::Index>(i - 1)).sum();
    const double col_expected = std::pow(1.0 + x, n) - std::pow(1.0 + x, n - static_cast<double>(i) + 1.0);
    cw.max_column_sum_error = std::max(cw.max_column_sum_error, std::abs(col - col_expected));
  }

  Eigen::RowVectorXd v(static_cast<Eigen::Index>(N));
  for (std::size_t i = 0; i < N; ++i) v(static_cast<Eigen::Index>(i)) = static_cast<double>(i) / (n - 1.0);
  const Eigen::RowVectorXd vB = v * cw.B;
  cw.v_lemma_violation = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < vB.size(); ++i) {
    cw.v_lemma_violation = std::max(cw.v_lemma_violation, vB(i) - v(i) * r);
  }
  return cw;
}

// ===========================================================================
// 1D Ising

Ising1dClosedForms ising1d_closed_forms(std::size_t N, double beta, double h) {
  if (N < 2) fail(ErrorCode::kInvalidArgument, "1D Ising needs N >= 2");
  if (!(beta > 0.0)) fail(ErrorCode::kInvalidArgument, "1D Ising closed forms need beta > 0");
  Ising1dClosedForms is;
  is.N = N;
  is.beta = beta;
  is.h = h;
  is.rho = 1.0 / (1.0 + std::exp(-4.0 * beta));
  if (h <= 0.0) {
    is.off_diagonal = 1.0 / (1.0 + std::exp(-4.0 * beta - 2.0 * h)) - 1.0 / (1.0 + std::exp(-2.0 * h));
  } else {
    is.off_diagonal = 1.0 / (1.0 + std::exp(-2.0 * h)) - 1.0 / (1.0 + std::exp(4.0 * beta - 2.0 * h));
  }
  const auto n = static_cast<Eigen::Index>(N);
  is.A = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    is.A(i, i + 1) = is.off_diagonal;
    is.A(i + 1, i) = is.off_diagonal;
  }
  is.norm_A = norm1(is.A);
  const double rho = is.rho;
  is.kappa_random = 2.0 / static_cast<double>(N) * (1.0 - rho);
  is.kappa_systemic = 2.0 * (1.0 - rho) / (1.5 - rho);
  is.gamma_ps_systemic = 2.0 * (1.0 - rho) / ((1.5 - rho) * (1.5 - rho));
  is.B = systemic_scan_matrix(is.A);
  is.norm_B = norm1(is.B);
  is.norm_B_claim = (rho - 0.5) / (1.5 - rho);
  is.norm_B_holds = is.norm_B <= is.norm_B_claim + 1e-12;
  return is;
}

}  // namespace ricci
