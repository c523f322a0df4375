#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ricci::testkit {

namespace {

constexpr double kPivotEps = 1e-11;

struct Tableau {
  Matrix T;
  std::vector<Eigen::Index> basis;
  Eigen::Index m = 0;
  Eigen::Index rhs = 0;

  void pivot(Eigen::Index r, Eigen::Index j) {
    T.row(r) /= T(r, j);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i != r && T(i, j) != 0.0) T.row(i) -= T(i, j) * T.row(r);
    }
    basis[static_cast<std::size_t>(r)] = j;
  }

  void run(Eigen::Index allowed) {
    for (;;) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        if (T(m, j) < -kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        if (T(i, enter) <= kPivotEps) continue;
        const double ratio = T(i, rhs) / T(i, enter);
        if (ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 && leave >= 0 &&
             basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) throw std::runtime_error("LP unbounded");
      pivot(leave, enter);
    }
  }
};

}  // namespace

double lp_min(Matrix A, Vector b, const Vector& c) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b(i) < 0) {
      A.row(i) *= -1.0;
      b(i) *= -1.0;
    }
  }
  Tableau t;
  t.m = m;
  t.rhs = n + m;
  t.T = Matrix::Zero(m + 1, n + m + 1);
  t.T.topLeftCorner(m, n) = A;
  t.T.block(0, n, m, m).setIdentity();
  t.T.col(t.rhs).head(m) = b;
  for (Eigen::Index i = 0; i < m; ++i) t.basis.push_back(n + i);

  // Phase 1: minimise the sum of artificials.
  t.T.block(m, n, 1, m).setOnes();
  for (Eigen::Index i = 0; i < m; ++i) t.T.row(m) -= t.T.row(i);
  t.run(n + m);
  if (-t.T(m, t.rhs) > 1e-9) throw std::runtime_error("LP infeasible");
  for (Eigen::Index i = 0; i < m; ++i) {
    if (t.basis[static_cast<std::size_t>(i)] < n) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(t.T(i, j)) > kPivotEps) {
        t.pivot(i, j);
        break;
      }
    }
  }

  // Phase 2. Artificials left in the basis sit on redundant rows at level 0.
  t.T.row(m).setZero();
  t.T.row(m).head(n) = c.transpose();
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = t.basis[static_cast<std::size_t>(i)];
    if (j < n) t.T.row(m) -= c(j) * t.T.row(i);
  }
  t.run(n);
  return -t.T(m, t.rhs);
}

double w1_lp(const Vector& mu, const Vector& nu, const Matrix& d) {
  std::vector<Eigen::Index> a;
  std::vector<Eigen::Index> b;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (mu(i) > 0) a.push_back(i);
    if (nu(i) > 0) b.push_back(i);
  }
  const auto na = static_cast<Eigen::Index>(a.size());
  const auto nb = static_cast<Eigen::Index>(b.size());
  Matrix A = Matrix::Zero(na + nb, na * nb);
  Vector rhs(na + nb);
  Vector cost(na * nb);
  for (Eigen::Index i = 0; i < na; ++i) {
    rhs(i) = mu(a[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < nb; ++j) {
      const Eigen::Index v = i * nb + j;
      A(i, v) = 1.0;
      A(na + j, v) = 1.0;
      cost(v) = d(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]);
    }
  }
  for (Eigen::Index j = 0; j < nb; ++j) rhs(na + j) = nu(b[static_cast<std::size_t>(j)]);
  return lp_min(A, rhs, cost);
}

Matrix random_metric(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto N = static_cast<Eigen::Index>(n);
  Matrix d = Matrix::Zero(N, N);
  const int kind = std::uniform_int_distribution<int>(0, 2)(rng);
  if (kind == 0) {
    Matrix pts(N, 3);
    for (Eigen::Index i = 0; i < N; ++i) {
      for (int c = 0; c < 3; ++c) pts(i, c) = u(rng);
    }
    for (Eigen::Index i = 0; i < N; ++i) {
      for (Eigen::Index j = 0; j < N; ++j) d(i, j) = (pts.row(i) - pts.row(j)).norm();
    }
    return d;
  }
  const double inf = std::numeric_limits<double>::infinity();
  d.setConstant(inf);
  d.diagonal().setZero();
  auto weight = [&] { return kind == 1 ? 0.2 + u(rng) : 1.0; };
  for (Eigen::Index i = 1; i < N; ++i) {
    const auto j = std::uniform_int_distribution<Eigen::Index>(0, i - 1)(rng);
    d(i, j) = d(j, i) = weight();
  }
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = i + 1; j < N; ++j) {
      if (u(rng) < 0.25) d(i, j) = d(j, i) = std::min(d(i, j), weight());
    }
  }
  for (Eigen::Index k = 0; k < N; ++k) {
    for (Eigen::Index i = 0; i < N; ++i) {
      for (Eigen::Index j = 0; j < N; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
    }
  }
  return d;
}

Matrix random_kernel(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto N = static_cast<Eigen::Index>(n);
  Matrix p = Matrix::Zero(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    p(i, (i + 1) % N) = 0.1 + u(rng);
    p(i, i) = 0.1 + u(rng);
    for (Eigen::Index j = 0; j < N; ++j) {
      if (u(rng) < 0.3) p(i, j) += u(rng);
    }
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

Matrix random_reversible_kernel(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto N = static_cast<Eigen::Index>(n);
  Matrix w = Matrix::Zero(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    w(i, i) = u(rng);
    if (i + 1 < N) w(i, i + 1) = w(i + 1, i) = 0.1 + u(rng);
    for (Eigen::Index j = i + 2; j < N; ++j) {
      if (u(rng) < 0.2) w(i, j) = w(j, i) = u(rng);
    }
  }
  Matrix p = w;
  for (Eigen::Index i = 0; i < N; ++i) p.row(i) /= w.row(i).sum();
  return p;
}

ChainSpec make_chain(const Matrix& d, const Matrix& p) {
  std::vector<std::string> labels;
  for (Eigen::Index i = 0; i < d.rows(); ++i) labels.push_back(std::to_string(i));
  auto space = std::make_shared<const FiniteMetricSpace>(std::move(labels), d);
  return ChainSpec(MarkovKernel(space, p));
}

Vector random_measure(std::mt19937_64& rng, std::size_t n, std::size_t support) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < std::max<std::size_t>(1, std::min(support, n)); ++i) {
    v(static_cast<Eigen::Index>(idx[i])) = u(rng);
  }
  return v / v.sum();
}

Vector random_lipschitz(std::mt19937_64& rng, const Matrix& d) {
  const Eigen::Index n = d.rows();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto anchors = std::uniform_int_distribution<Eigen::Index>(1, std::max<Eigen::Index>(1, n / 2))(rng);
  Vector f = Vector::Constant(n, std::numeric_limits<double>::infinity());
  const double scale = d.maxCoeff();
  for (Eigen::Index a = 0; a < anchors; ++a) {
    const auto x = std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng);
    const double v = scale * u(rng);
    for (Eigen::Index y = 0; y < n; ++y) f(y) = std::min(f(y), v + d(x, y));
  }
  return u(rng) < 0.5 ? Vector(-f) : f;
}

double brute_kappa(const ChainSpec& chain, unsigned k) {
  const Matrix P = chain.kernel().dense();
  Matrix Pk = Matrix::Identity(P.rows(), P.cols());
  for (unsigned i = 0; i < k; ++i) Pk = Pk * P;
  const Matrix& d = chain.space().distances();
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index x = 0; x < P.rows(); ++x) {
    for (Eigen::Index y = x + 1; y < P.rows(); ++y) {
      const double w = w1_lp(Pk.row(x).transpose(), Pk.row(y).transpose(), d);
      best = std::min(best, 1.0 - w / d(x, y));
    }
  }
  return best;
}

}  // namespace ricci::testkit
