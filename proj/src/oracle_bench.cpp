#include "ricci/oracle_bench.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "ricci/error.hpp"
#include "ricci/model_zoo.hpp"
#include "ricci/symmetry.hpp"

namespace ricci {

namespace {

void check_oracle_size(std::size_t n) {
  if (n > kMaxOracleStates) {
    fail(ErrorCode::kTooLarge, "exact oracle is capped at " + std::to_string(kMaxOracleStates) + " states");
  }
}

// D^{1/2} M D^{-1/2}.
Matrix similarity(const Matrix& M, const Vector& pi) {
  const Vector s = pi.array().sqrt().matrix();
  const Vector inv = s.cwiseInverse();
  return s.asDiagonal() * M * inv.asDiagonal();
}

double second_largest(const Vector& ascending) {
  const Eigen::Index n = ascending.size();
  return n >= 2 ? ascending(n - 2) : 0.0;
}

double choose(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

}  // namespace

double multiplicative_gap(const ChainSpec& chain, unsigned k) {
  check_oracle_size(chain.size());
  const Matrix P = chain.kernel().dense();
  Matrix Pk = Matrix::Identity(P.rows(), P.cols());
  for (unsigned i = 0; i < k; ++i) Pk = Pk * P;
  const Matrix Q = similarity(Pk, chain.pi().weights());
  Matrix S = Q.transpose() * Q;
  S = 0.5 * (S + S.transpose()).eval();
  return 1.0 - second_largest(symmetric_eigen(S).values);
}

OracleReport exact_gaps(const ChainSpec& chain, unsigned kmax) {
  const std::size_t n = chain.size();
  check_oracle_size(n);
  OracleReport r;
  r.reversible = chain.reversible();
  const Matrix P = chain.kernel().dense();
  const Vector& pi = chain.pi().weights();
  if (pi.minCoeff() <= 0.0) fail(ErrorCode::kZeroMass, "oracle needs a positive stationary distribution");

  if (r.reversible) {
    Matrix S = similarity(P, pi);
    S = 0.5 * (S + S.transpose()).eval();
    r.eigenvalues = symmetric_eigen(S).values;
    const Eigen::Index m = r.eigenvalues.size();
    if (m >= 2) {
      r.gamma = 1.0 - r.eigenvalues(m - 2);
      r.gamma_star = 1.0 - std::max(std::abs(r.eigenvalues(0)), std::abs(r.eigenvalues(m - 2)));
    } else {
      r.gamma = 1.0;
      r.gamma_star = 1.0;
    }
  } else {
    r.gamma = std::numeric_limits<double>::quiet_NaN();
    Eigen::EigenSolver<Matrix> solver(P, false);
    std::vector<std::complex<double>> values(solver.eigenvalues().data(),
                                             solver.eigenvalues().data() + solver.eigenvalues().size());
    auto unit = std::min_element(values.begin(), values.end(), [](auto a, auto b) {
      return std::abs(a - 1.0) < std::abs(b - 1.0);
    });
    values.erase(unit);
    double top = 0.0;
    for (const auto& v : values) top = std::max(top, std::abs(v));
    r.gamma_star = 1.0 - top;
  }

  if (kmax >= 1) {
    Matrix Pk = Matrix::Identity(P.rows(), P.cols());
    for (unsigned k = 1; k <= kmax; ++k) {
      Pk = Pk * P;
      const Matrix Q = similarity(Pk, pi);
      Matrix S = Q.transpose() * Q;
      S = 0.5 * (S + S.transpose()).eval();
      const double gap = (1.0 - second_largest(symmetric_eigen(S).values)) / k;
      r.gamma_ps_by_k.push_back(gap);
      if (r.gamma_ps_k == 0 || gap > r.gamma_ps) {
        r.gamma_ps = gap;
        r.gamma_ps_k = k;
      }
    }
  }
  return r;
}

std::vector<MixingTime> exact_mixing(const SparseMatrix& P, const Vector& pi, const std::vector<State>& starts,
                                     const std::vector<double>& eps_list, std::size_t t_limit) {
  const auto n = P.rows();
  if (pi.size() != n) fail(ErrorCode::kInvalidArgument, "pi has the wrong length");
  std::vector<MixingTime> out;
  for (double eps : eps_list) {
    if (!(eps > 0.0)) fail(ErrorCode::kInvalidArgument, "mixing threshold must be positive");
    out.push_back({eps, 0});
  }
  std::vector<bool> done(out.size(), false);
  std::size_t remaining = out.size();

  Matrix rows = Matrix::Zero(static_cast<Eigen::Index>(starts.size()), n);
  for (std::size_t r = 0; r < starts.size(); ++r) {
    rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(starts[r])) = 1.0;
  }
  const Eigen::RowVectorXd target = pi.transpose();
  for (std::size_t t = 0; remaining > 0; ++t) {
    double d = 0.0;
    for (Eigen::Index r = 0; r < rows.rows(); ++r) d = std::max(d, 0.5 * (rows.row(r) - target).cwiseAbs().sum());
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (!done[i] && d <= out[i].eps) {
        out[i].t = t;
        done[i] = true;
        --remaining;
      }
    }
    if (remaining == 0) break;
    if (t >= t_limit) fail(ErrorCode::kUnbounded, "mixing time exceeds the step limit");
    rows = (rows * P).eval();
  }
  return out;
}

std::vector<MixingTime> exact_mixing(const ChainSpec& chain, const std::vector<double>& eps_list, std::size_t t_limit) {
  check_oracle_size(chain.size());
  const auto orbits = state_orbits(chain.size(), chain.symmetries());
  return exact_mixing(chain.kernel().matrix(), chain.pi().weights(), orbits.representative, eps_list, t_limit);
}

double exact_bias(const ChainSpec& chain, const Vector& q, const Vector& f, std::size_t N, std::size_t t0) {
  if (!(t0 < N)) fail(ErrorCode::kInvalidArgument, "need t0 < N");
  if (q.size() != f.size() || static_cast<std::size_t>(q.size()) != chain.size()) {
    fail(ErrorCode::kInvalidArgument, "q and f must match the chain");
  }
  Vector v = q;
  double total = 0.0;
  for (std::size_t i = 1; i <= N; ++i) {
    v = chain.kernel().step(v);
    if (i > t0) total += v.dot(f);
  }
  return std::abs(total / static_cast<double>(N - t0) - chain.pi().weights().dot(f));
}

double exact_variance(const Vector& pi, const Vector& f) {
  const double mean = pi.dot(f);
  return pi.dot((f.array() - mean).square().matrix());
}

// ===========================================================================
// Binary cube via its site-permutation symmetry.
//
// Functions on level m split into pieces indexed by j = 0..min(m, N-m). For a
// harmonic h on level j, e_m = L^{m-j} h (L sums over subsets one smaller)
// spans the j-piece across levels, and the up-sum T satisfies
// T e_{m+1} = (m-j+1)(N-m-j) e_m. The walk therefore acts on each piece as a
// tridiagonal matrix, repeated dim H_j = C(N,j) - C(N,j-1) times.

std::vector<std::pair<double, std::size_t>> cube_spectrum(std::size_t N, std::size_t R) {
  if (N < 1 || R > N) fail(ErrorCode::kInvalidArgument, "binary cube needs R <= N");
  const double n = static_cast<double>(N);
  std::vector<std::pair<double, std::size_t>> spectrum;
  for (std::size_t j = 0; 2 * j <= N; ++j) {
    const std::size_t lo = std::max(j, R);
    const std::size_t hi = N - j;
    if (lo > hi) continue;
    const auto size = static_cast<Eigen::Index>(hi - lo + 1);
    Vector diag(size);
    Vector off(std::max<Eigen::Index>(0, size - 1));
    for (std::size_t m = lo; m <= hi; ++m) {
      const auto i = static_cast<Eigen::Index>(m - lo);
      diag(i) = m == R ? 1.0 - (n - static_cast<double>(R)) / (2.0 * n) : 0.5;
      if (m < hi) {
        const double c = static_cast<double>(m - j + 1) * static_cast<double>(N - m - j);
        off(i) = std::sqrt(c) / (2.0 * n);
      }
    }
    const double mult = choose(N, j) - (j > 0 ? choose(N, j - 1) : 0.0);
    const Vector values = tridiagonal_eigenvalues(diag, off);
    for (Eigen::Index i = 0; i < values.size(); ++i) spectrum.emplace_back(values(i), static_cast<std::size_t>(mult));
  }
  std::sort(spectrum.begin(), spectrum.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  return spectrum;
}

double cube_gap(std::size_t N, std::size_t R) {
  const auto spectrum = cube_spectrum(N, R);
  if (spectrum.empty()) return 0.0;
  if (spectrum.front().second > 1) return 0.0;
  return spectrum.size() >= 2 ? 1.0 - spectrum[1].first : 1.0;
}

std::vector<MixingTime> cube_mixing(std::size_t N, std::size_t R, const std::vector<double>& eps_list) {
  const auto states = cube_states(N, R);
  const SparseMatrix P = binary_cube_kernel(N, R);
  std::vector<State> starts;
  for (std::size_t level = R; level <= N; ++level) {
    const std::uint64_t rep = level == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << level) - 1;
    starts.push_back(static_cast<State>(std::lower_bound(states.begin(), states.end(), rep) - states.begin()));
  }
  const auto n = static_cast<Eigen::Index>(states.size());
  return exact_mixing(P, Vector::Constant(n, 1.0 / static_cast<double>(n)), starts, eps_list);
}

// ===========================================================================

VerdictTable certify(const std::vector<Claim>& claims, double tol) {
  VerdictTable table;
  for (const auto& c : claims) {
    Verdict v;
    v.claim = c;
    v.slack = c.direction == Direction::kLower ? c.oracle - c.bound : c.bound - c.oracle;
    v.pass = std::isfinite(c.oracle) && !std::isnan(c.bound) && !std::isnan(v.slack) && v.slack >= -tol;
    if (v.pass) {
      ++table.passed;
    } else {
      ++table.failed;
    }
    table.verdicts.push_back(std::move(v));
  }
  return table;
}

}  // namespace ricci
