#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

#include "ricci/curvature.hpp"
#include "ricci/dobrushin_glauber.hpp"
#include "ricci/error.hpp"
#include "ricci/model_zoo.hpp"

using namespace ricci;

TEST(Dobrushin, Norms) {
  Matrix A(2, 2);
  A << 0.0, 0.5, 0.1, 0.0;
  EXPECT_DOUBLE_EQ(norm1(A), 0.5);
  EXPECT_DOUBLE_EQ(norm1(A, NormKind::kRow), 0.5);
  A(0, 1) = -0.7;
  A(1, 0) = 0.2;
  EXPECT_DOUBLE_EQ(norm1(A), 0.7);
  Matrix B(2, 3);
  B << 1, 2, 3, 4, 5, 6;
  EXPECT_DOUBLE_EQ(norm1(B), 9.0);
  EXPECT_DOUBLE_EQ(norm1(B, NormKind::kRow), 15.0);
}

TEST(Dobrushin, SpectralRadiusMatchesEigenvalues) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + trial % 9;
    Matrix A(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) A(i, j) = i == j ? 0.0 : (u(rng) < 0.5 ? u(rng) : 0.0);
    }
    const auto ev = Eigen::EigenSolver<Matrix>(A, false).eigenvalues();
    double expected = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) expected = std::max(expected, std::abs(ev(i)));
    EXPECT_NEAR(spectral_radius(A), expected, 1e-8) << "trial " << trial;
  }
}

TEST(Dobrushin, SystemicMatrixIsOrderedProduct) {
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> u(0.0, 0.3);
  const Eigen::Index n = 5;
  Matrix A = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = i == j ? 0.0 : u(rng);
  }
  Matrix expected = Matrix::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Matrix Bi = Matrix::Identity(n, n);
    Bi.row(i) = A.row(i);
    expected = Bi * expected;
  }
  EXPECT_LT((systemic_scan_matrix(A) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Dobrushin, RandomScanOneStep) {
  const Matrix A = curie_weiss_A(4, 0.5);
  const Matrix M = 0.75 * Matrix::Identity(4, 4) + A / 4.0;
  const auto b = random_scan_bound(A, 1);
  EXPECT_NEAR(b.kappa_lower, 1.0 - norm1(M), 1e-15);
  EXPECT_NEAR(b.kappa_lower, (1.0 - 0.5 * 3.0 / 4.0) / 4.0, 1e-15);
  EXPECT_NEAR(b.gap_lower, (1.0 - 0.5 * 3.0 / 4.0) / 4.0, 1e-12);
}

TEST(Dobrushin, CurieWeissExactEntriesBelowCoupling) {
  for (std::size_t N : {2U, 4U, 7U}) {
    for (double beta : {0.3, 0.9}) {
      const auto d = estimate_dobrushin(curie_weiss_model(N, beta, 0.2), true);
      for (Eigen::Index i = 0; i < d.A.rows(); ++i) {
        EXPECT_EQ(d.A(i, i), 0.0);
        for (Eigen::Index j = 0; j < d.A.cols(); ++j) {
          if (i != j) EXPECT_LE(d.A(i, j), std::tanh(beta / static_cast<double>(N)) + 1e-15);
        }
      }
    }
  }
}

TEST(Dobrushin, IsingTightMatrixIsTridiagonal) {
  for (std::size_t N = 2; N <= 6; ++N) {
    for (double beta : {0.1, 0.25, 0.7}) {
      const double rho = 1.0 / (1.0 + std::exp(-4.0 * beta));
      const auto d = estimate_dobrushin(ising1d_model(N, beta, 0.0), true);
      for (Eigen::Index i = 0; i < d.A.rows(); ++i) {
        for (Eigen::Index j = 0; j < d.A.cols(); ++j) {
          const double expected = std::abs(i - j) == 1 ? rho - 0.5 : 0.0;
          EXPECT_NEAR(d.A(i, j), expected, 1e-12);
        }
      }
      const auto closed = ising1d_closed_forms(N, beta, 0.0);
      EXPECT_NEAR(closed.off_diagonal, rho - 0.5, 1e-15);
    }
  }
}

TEST(Dobrushin, IsingFreeBoundaryEnds) {
  const double beta = 0.4;
  const auto d = estimate_dobrushin(ising1d_model(4, beta, 0.0, Boundary::kFree), true);
  EXPECT_NEAR(d.A(0, 1), std::tanh(beta), 1e-12);
  EXPECT_GT(d.A(0, 1), 1.0 / (1.0 + std::exp(-4.0 * beta)) - 0.5);
}

TEST(Dobrushin, CurieWeissClosedForms) {
  for (std::size_t N : {2U, 5U, 20U, 60U}) {
    const auto cw = curie_weiss_closed_forms(N, 0.5);
    EXPECT_NEAR(cw.norm_B, cw.norm_B_closed, 1e-12);
    EXPECT_LE(cw.v_lemma_violation, 1e-12);
    EXPECT_LT(cw.max_entry_error, 1e-12);
  }
  EXPECT_NEAR(curie_weiss_closed_forms(2, 1.0).norm_B, 0.75, 1e-15);
  EXPECT_NEAR(curie_weiss_closed_forms(3, 0.5).kappa_systemic, 2.0 - std::exp(0.5), 1e-15);
}

TEST(Dobrushin, PathCouplingBoundsBelowExactCurvature) {
  for (std::size_t N : {3U, 5U}) {
    for (double beta : {0.3, 0.8}) {
      const auto model = curie_weiss_model(N, beta, 0.1);
      const auto d = estimate_dobrushin(model, true);
      const auto rs = glauber_chain(model, Scan::kRandom);
      const auto ss = glauber_chain(model, Scan::kSystemic);
      const auto pr = curvature_profile(*rs, 4, PairSelection::geodesic(1.0));
      const auto ps = curvature_profile(*ss, 4);
      for (unsigned k = 1; k <= 4; ++k) {
        EXPECT_LE(random_scan_bound(d.A, k).kappa_lower, pr.kappa[k] + 1e-9);
        EXPECT_LE(systemic_scan_bound(d.B, k), ps.kappa[k] + 1e-9);
      }
    }
  }
}

TEST(Dobrushin, InexactUsesTanh) {
  const auto d = estimate_dobrushin(ising1d_model(5, 0.3, 0.0), false);
  EXPECT_NEAR(d.A(1, 2), std::tanh(0.3), 1e-15);
  EXPECT_NEAR(d.A(1, 3), 0.0, 0.0);
}

TEST(Dobrushin, TooLarge) {
  try {
    estimate_dobrushin(curie_weiss_model(kExactDobrushinSites + 1, 0.5, 0.0), true);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
}

TEST(Dobrushin, MatrixWrapperValidates) {
  Matrix A = Matrix::Zero(2, 2);
  A(0, 0) = 0.1;
  EXPECT_THROW(dobrushin_from_matrix(A), Error);
  A(0, 0) = 0.0;
  A(0, 1) = -0.1;
  EXPECT_THROW(dobrushin_from_matrix(A), Error);
}
