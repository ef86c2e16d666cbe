#include "chebyshev_lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace leafcomm::detail {

namespace {

constexpr double kPriceTol = 1e-10;
constexpr double kPivotTol = 1e-9;
constexpr int kRefactorEvery = 128;

}  // namespace

ChebyshevOutcome solve_chebyshev(int m, const std::vector<double>& f, const std::vector<u64>& monomials,
                                 double target, double early_accept, int max_iterations) {
  const u64 P = u64{1} << m;
  const int N = static_cast<int>(monomials.size());
  const int R = N + 1;
  std::vector<int> row_of(P, -1);
  for (int i = 0; i < N; ++i) row_of[monomials[i]] = i;

  // Columns: [0, P) -> u_x, [P, 2P) -> v_x, 2P -> slack of the norm row.
  const long slack = static_cast<long>(2 * P);
  auto cost = [&](long j) -> double {
    if (j == slack) return 0.0;
    return j < static_cast<long>(P) ? -f[j] : f[j - P];
  };
  auto column = [&](long j, Eigen::VectorXd& a) {
    a.setZero(R);
    a[N] = 1.0;
    if (j == slack) return;
    u64 x = static_cast<u64>(j < static_cast<long>(P) ? j : j - P);
    double sign = j < static_cast<long>(P) ? 1.0 : -1.0;
    for (u64 s = x;; s = (s - 1) & x) {
      int r = row_of[s];
      if (r >= 0) a[r] = sign;
      if (s == 0) break;
    }
  };

  // Initial basis: u at the point x = S for every monomial S, plus the slack.
  std::vector<long> basis(R);
  for (int i = 0; i < N; ++i) basis[i] = static_cast<long>(monomials[i]);
  basis[N] = slack;

  // B0 = [[M, 0], [1^T, 1]] with M[S'][S] = [S' subset S]; its inverse is explicit (Mobius).
  Eigen::MatrixXd Binv = Eigen::MatrixXd::Zero(R, R);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      u64 a = monomials[i], b = monomials[j];
      if ((a & b) == a) Binv(i, j) = ((popcount(b) - popcount(a)) & 1) ? -1.0 : 1.0;
    }
  }
  for (int j = 0; j < N; ++j) {
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += Binv(i, j);
    Binv(N, j) = -s;
  }
  Binv(N, N) = 1.0;

  // Perturbed right-hand side b = e_N + B0 xi keeps the start feasible and avoids stalling.
  Rng rng(0x5eedULL + static_cast<u64>(N) * 131 + static_cast<u64>(m));
  Eigen::VectorXd xi(R);
  for (int i = 0; i < R; ++i) xi[i] = 1e-9 * (1.0 + rng.uniform01());
  Eigen::VectorXd b = Eigen::VectorXd::Zero(R);
  {
    Eigen::VectorXd col;
    for (int i = 0; i < R; ++i) {
      column(basis[i], col);
      b += xi[i] * col;
    }
    b[N] += 1.0;
  }
  Eigen::VectorXd xB = xi;
  xB[N] += 1.0;

  ChebyshevOutcome out;
  std::vector<double> z(P);
  Eigen::VectorXd cB(R), y(R), a(R), d(R);

  auto refactor = [&]() {
    Eigen::MatrixXd B(R, R);
    Eigen::VectorXd col;
    for (int i = 0; i < R; ++i) {
      column(basis[i], col);
      B.col(i) = col;
    }
    Binv = B.partialPivLu().inverse();
    xB = Binv * b;
    for (int i = 0; i < R; ++i) xB[i] = std::max(0.0, xB[i]);
  };

  for (int it = 0;; ++it) {
    out.iterations = it;
    if (it > 0 && it % kRefactorEvery == 0) refactor();
    for (int i = 0; i < R; ++i) cB[i] = cost(basis[i]);
    y.noalias() = Binv.transpose() * cB;
    const double y0 = y[N];

    std::fill(z.begin(), z.end(), 0.0);
    for (int i = 0; i < N; ++i) z[monomials[i]] = y[i];
    for (int bit = 0; bit < m; ++bit) {
      u64 hb = u64{1} << bit;
      for (u64 x = 0; x < P; ++x)
        if (x & hb) z[x] += z[x ^ hb];
    }

    double upper = 0.0, best = kPriceTol;
    long enter = -1;
    for (u64 x = 0; x < P; ++x) {
      double r = f[x] + z[x];  // f - p with p = -z
      upper = std::max(upper, std::abs(r));
      double du = -r - y0, dv = r - y0;
      if (du > best) {
        best = du;
        enter = static_cast<long>(x);
      }
      if (dv > best) {
        best = dv;
        enter = static_cast<long>(x + P);
      }
    }
    if (-y0 > best) enter = slack;

    out.upper = upper;
    out.lower = cB.dot(xB);
    if (upper <= early_accept || enter == -1 || out.lower > target + 1e-9 || it >= max_iterations) {
      out.coef.resize(N);
      for (int i = 0; i < N; ++i) out.coef[i] = -y[i];
      if (upper <= early_accept) out.status = ChebyshevOutcome::Status::BelowTarget;
      else if (enter == -1) out.status = ChebyshevOutcome::Status::Optimal;
      else if (out.lower > target + 1e-9) out.status = ChebyshevOutcome::Status::AboveTarget;
      else out.status = ChebyshevOutcome::Status::IterationLimit;
      return out;
    }

    column(enter, a);
    d.noalias() = Binv * a;
    int leave = -1;
    double theta = 0.0, dl = 0.0;
    for (int i = 0; i < R; ++i) {
      if (d[i] <= kPivotTol) continue;
      double ratio = std::max(0.0, xB[i]) / d[i];
      if (leave == -1 || ratio < theta - 1e-15 || (ratio <= theta + 1e-15 && d[i] > dl)) {
        leave = i;
        theta = ratio;
        dl = d[i];
      }
    }
    if (leave == -1) {
      // Cannot happen for a bounded problem; fall back to a fresh factorization.
      refactor();
      continue;
    }
    xB -= theta * d;
    xB[leave] = theta;
    for (int i = 0; i < R; ++i)
      if (xB[i] < 0) xB[i] = 0;
    Eigen::RowVectorXd pr = Binv.row(leave) / d[leave];
    Binv.noalias() -= d * pr;
    Binv.row(leave) = pr;
    basis[leave] = enter;
  }
}

}  // namespace leafcomm::detail
