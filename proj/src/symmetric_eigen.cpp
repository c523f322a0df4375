#include <algorithm>
#include <cmath>
#include <numeric>

#include "ricci/error.hpp"
#include "ricci/oracle_bench.hpp"

namespace ricci {

namespace {

// Householder reduction to tridiagonal form, working in place on the lower
// triangle of V (column-major). On return d holds the diagonal and e the
// sub-diagonal shifted by one (e[0] = 0). V holds the orthogonal transform
// only when accumulate is set.
void tred2(Matrix& V, Vector& d, Vector& e, bool accumulate) {
  const Eigen::Index n = V.rows();
  d.resize(n);
  e.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) d(j) = V(n - 1, j);

  for (Eigen::Index i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (Eigen::Index k = 0; k < i; ++k) scale += std::abs(d(k));
    if (scale == 0.0) {
      e(i) = d(i - 1);
      for (Eigen::Index j = 0; j < i; ++j) {
        d(j) = V(i - 1, j);
        V(i, j) = 0.0;
        V(j, i) = 0.0;
      }
    } else {
      for (Eigen::Index k = 0; k < i; ++k) {
        d(k) /= scale;
        h += d(k) * d(k);
      }
      double f = d(i - 1);
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e(i) = scale * g;
      h -= f * g;
      d(i - 1) = f - g;
      for (Eigen::Index j = 0; j < i; ++j) e(j) = 0.0;

      for (Eigen::Index j = 0; j < i; ++j) {
        f = d(j);
        V(j, i) = f;
        g = e(j) + V(j, j) * f;
        const double* col = V.data() + j * n;
        for (Eigen::Index k = j + 1; k <= i - 1; ++k) {
          g += col[k] * d(k);
          e(k) += col[k] * f;
        }
        e(j) = g;
      }
      f = 0.0;
      for (Eigen::Index j = 0; j < i; ++j) {
        e(j) /= h;
        f += e(j) * d(j);
      }
      const double hh = f / (h + h);
      for (Eigen::Index j = 0; j < i; ++j) e(j) -= hh * d(j);
      for (Eigen::Index j = 0; j < i; ++j) {
        f = d(j);
        g = e(j);
        double* col = V.data() + j * n;
        for (Eigen::Index k = j; k <= i - 1; ++k) col[k] -= (f * e(k) + g * d(k));
        d(j) = V(i - 1, j);
        V(i, j) = 0.0;
      }
    }
    d(i) = h;
  }

  if (!accumulate) {
    for (Eigen::Index i = 0; i < n; ++i) d(i) = V(i, i);
    e(0) = 0.0;
    return;
  }

  for (Eigen::Index i = 0; i < n - 1; ++i) {
    V(n - 1, i) = V(i, i);
    V(i, i) = 1.0;
    const double h = d(i + 1);
    if (h != 0.0) {
      for (Eigen::Index k = 0; k <= i; ++k) d(k) = V(k, i + 1) / h;
      for (Eigen::Index j = 0; j <= i; ++j) {
        double g = 0.0;
        for (Eigen::Index k = 0; k <= i; ++k) g += V(k, i + 1) * V(k, j);
        for (Eigen::Index k = 0; k <= i; ++k) V(k, j) -= g * d(k);
      }
    }
    for (Eigen::Index k = 0; k <= i; ++k) V(k, i + 1) = 0.0;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    d(j) = V(n - 1, j);
    V(n - 1, j) = 0.0;
  }
  V(n - 1, n - 1) = 1.0;
  e(0) = 0.0;
}

// Implicit QL on the tridiagonal (d, e). Rotations are applied to V when it
// is non-empty.
void tql2(Vector& d, Vector& e, Matrix* V) {
  const Eigen::Index n = d.size();
  if (n == 0) return;
  for (Eigen::Index i = 1; i < n; ++i) e(i - 1) = e(i);
  e(n - 1) = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::ldexp(1.0, -52);
  for (Eigen::Index l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d(l)) + std::abs(e(l)));
    Eigen::Index m = l;
    while (m < n - 1) {
      if (std::abs(e(m)) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 200) fail(ErrorCode::kInvalidArgument, "tridiagonal QL iteration did not converge");
        double g = d(l);
        double p = (d(l + 1) - g) / (2.0 * e(l));
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d(l) = e(l) / (p + r);
        d(l + 1) = e(l) * (p + r);
        const double dl1 = d(l + 1);
        double h = g - d(l);
        for (Eigen::Index i = l + 2; i < n; ++i) d(i) -= h;
        f += h;

        p = d(m);
        double c = 1.0;
        double c2 = c;
        double c3 = c;
        const double el1 = e(l + 1);
        double s = 0.0;
        double s2 = 0.0;
        for (Eigen::Index i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e(i);
          h = c * p;
          r = std::hypot(p, e(i));
          e(i + 1) = s * r;
          s = e(i) / r;
          c = p / r;
          p = c * d(i) - s * g;
          d(i + 1) = h + s * (c * g + s * d(i));
          if (V != nullptr) {
            for (Eigen::Index k = 0; k < n; ++k) {
              h = (*V)(k, i + 1);
              (*V)(k, i + 1) = s * (*V)(k, i) + c * h;
              (*V)(k, i) = c * (*V)(k, i) - s * h;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e(l) / dl1;
        e(l) = s * p;
        d(l) = c * p;
      } while (std::abs(e(l)) > eps * tst1);
    }
    d(l) += f;
    e(l) = 0.0;
  }
}

}  // namespace

SymmetricEigen symmetric_eigen(const Matrix& A, bool want_vectors) {
  if (A.rows() != A.cols()) fail(ErrorCode::kInvalidArgument, "eigensolver needs a square matrix");
  if (!A.allFinite()) fail(ErrorCode::kInvalidArgument, "eigensolver needs finite entries");
  SymmetricEigen out;
  const Eigen::Index n = A.rows();
  if (n == 0) return out;
  Matrix V = A;
  Vector d;
  Vector e;
  tred2(V, d, e, want_vectors);
  tql2(d, e, want_vectors ? &V : nullptr);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return d(a) < d(b); });
  out.values.resize(n);
  if (want_vectors) out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = d(order[static_cast<std::size_t>(i)]);
    if (want_vectors) out.vectors.col(i) = V.col(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

Vector tridiagonal_eigenvalues(const Vector& diag, const Vector& off) {
  const Eigen::Index n = diag.size();
  if (n == 0) return Vector();
  if (off.size() != n - 1) fail(ErrorCode::kInvalidArgument, "off-diagonal must have n - 1 entries");
  Vector d = diag;
  Vector e(n);
  e(0) = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) e(i) = off(i - 1);
  tql2(d, e, nullptr);
  std::sort(d.data(), d.data() + n);
  return d;
}

}  // namespace ricci
