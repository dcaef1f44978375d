#include "pdmp/crk.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "pdmp/errors.hpp"

namespace pdmp {

namespace {

constexpr int kMaxIterations = 50;
constexpr double kResidualTol = 1e-12;

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// LU factorization with partial pivoting, in place. Returns false if a pivot
// is numerically zero.
bool lu_factor(std::vector<double>& m, std::vector<int>& piv, int n) {
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(m[static_cast<std::size_t>(k) * n + k]);
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(m[static_cast<std::size_t>(i) * n + k]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best < std::numeric_limits<double>::min()) return false;
    piv[k] = p;
    if (p != k) {
      for (int j = 0; j < n; ++j)
        std::swap(m[static_cast<std::size_t>(k) * n + j],
                  m[static_cast<std::size_t>(p) * n + j]);
    }
    const double pivot = m[static_cast<std::size_t>(k) * n + k];
    for (int i = k + 1; i < n; ++i) {
      const double factor = m[static_cast<std::size_t>(i) * n + k] / pivot;
      m[static_cast<std::size_t>(i) * n + k] = factor;
      if (factor != 0.0) {
        for (int j = k + 1; j < n; ++j)
          m[static_cast<std::size_t>(i) * n + j] -=
              factor * m[static_cast<std::size_t>(k) * n + j];
      }
    }
  }
  return true;
}

void lu_solve(const std::vector<double>& m, const std::vector<int>& piv,
              std::vector<double>& b, int n) {
  for (int k = 0; k < n; ++k) {
    if (piv[k] != k) std::swap(b[k], b[piv[k]]);
    for (int i = k + 1; i < n; ++i) b[i] -= m[static_cast<std::size_t>(i) * n + k] * b[k];
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) b[i] -= m[static_cast<std::size_t>(i) * n + j] * b[j];
    b[i] /= m[static_cast<std::size_t>(i) * n + i];
  }
}

// Residual of the stage equations for stage values k, G_i = k_i - y - h sum_j a_ij f_j.
// Also refreshes the stage derivatives f_j = rhs(t + c_j h, k_j).
double stage_residual(const ButcherTableau& tb, const RhsFn& rhs, double t,
                      std::span<const double> y, double h,
                      const std::vector<double>& k, std::vector<double>& f,
                      std::vector<double>& g) {
  const int s = tb.stages;
  const int n = static_cast<int>(y.size());
  for (int i = 0; i < s; ++i) {
    rhs(t + tb.c[i] * h,
        std::span<const double>(k.data() + static_cast<std::size_t>(i) * n,
                                static_cast<std::size_t>(n)),
        std::span<double>(f.data() + static_cast<std::size_t>(i) * n,
                          static_cast<std::size_t>(n)));
  }
  double norm = 0.0;
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = k[static_cast<std::size_t>(i) * n + j] - y[j];
      for (int l = 0; l < s; ++l)
        acc -= h * tb.a[i][l] * f[static_cast<std::size_t>(l) * n + j];
      g[static_cast<std::size_t>(i) * n + j] = acc;
      norm = std::max(norm, std::abs(acc));
    }
  }
  return norm;
}

StageData solve_explicit(const ButcherTableau& tb, const RhsFn& rhs, double t,
                         std::span<const double> y, double h) {
  const int s = tb.stages;
  const int n = static_cast<int>(y.size());
  StageData out{s, n, std::vector<double>(static_cast<std::size_t>(s) * n)};
  std::vector<double> k(y.begin(), y.end());
  for (int i = 0; i < s; ++i) {
    k.assign(y.begin(), y.end());
    for (int j = 0; j < i; ++j) {
      const double aij = tb.a[i][j];
      if (aij == 0.0) continue;
      const double* fj = out.deriv.data() + static_cast<std::size_t>(j) * n;
      for (int l = 0; l < n; ++l) k[l] += h * aij * fj[l];
    }
    rhs(t + tb.c[i] * h, k,
        std::span<double>(out.deriv.data() + static_cast<std::size_t>(i) * n,
                          static_cast<std::size_t>(n)));
  }
  return out;
}

StageData solve_implicit(const ButcherTableau& tb, const RhsFn& rhs, double t,
                         std::span<const double> y, double h) {
  const int s = tb.stages;
  const int n = static_cast<int>(y.size());
  const int dim = s * n;
  const double tol = kResidualTol * std::max(1.0, inf_norm(y));

  // Predictor: k_i = y + c_i h f(t, y).
  std::vector<double> f0(static_cast<std::size_t>(n));
  rhs(t, y, f0);
  std::vector<double> k(static_cast<std::size_t>(dim));
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < n; ++j)
      k[static_cast<std::size_t>(i) * n + j] = y[j] + tb.c[i] * h * f0[j];

  std::vector<double> f(static_cast<std::size_t>(dim));
  std::vector<double> g(static_cast<std::size_t>(dim));
  double res = stage_residual(tb, rhs, t, y, h, k, f, g);
  if (res <= tol) return StageData{s, n, std::move(f)};

  // Forward-difference Jacobian of the rhs at (t, y), reused for all stages.
  std::vector<double> jac(static_cast<std::size_t>(n) * n);
  {
    std::vector<double> yp(y.begin(), y.end());
    std::vector<double> fp(static_cast<std::size_t>(n));
    const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
    for (int j = 0; j < n; ++j) {
      const double delta = sqrt_eps * std::max(1.0, std::abs(y[j]));
      const double saved = yp[j];
      yp[j] = saved + delta;
      rhs(t, yp, fp);
      yp[j] = saved;
      for (int i = 0; i < n; ++i)
        jac[static_cast<std::size_t>(i) * n + j] = (fp[i] - f0[i]) / delta;
    }
  }

  // Newton matrix M = I - h (A (x) J).
  std::vector<double> m(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int bi = 0; bi < s; ++bi) {
    for (int bj = 0; bj < s; ++bj) {
      const double scale = -h * tb.a[bi][bj];
      if (scale == 0.0 && bi != bj) continue;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          double v = scale * jac[static_cast<std::size_t>(i) * n + j];
          if (bi == bj && i == j) v += 1.0;
          m[static_cast<std::size_t>(bi * n + i) * dim + (bj * n + j)] = v;
        }
      }
    }
  }

  std::vector<int> piv(static_cast<std::size_t>(dim));
  const bool factored = lu_factor(m, piv, dim);

  std::vector<double> delta(static_cast<std::size_t>(dim));
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    if (factored) {
      delta = g;
      lu_solve(m, piv, delta, dim);
      for (int i = 0; i < dim; ++i) k[i] -= delta[i];
    } else {
      // Damped fixed point: k <- k - omega G(k).
      for (int i = 0; i < dim; ++i) k[i] -= 0.5 * g[i];
    }
    res = stage_residual(tb, rhs, t, y, h, k, f, g);
    if (res <= tol) return StageData{s, n, std::move(f)};
  }
  throw StepError("implicit stage equations did not converge", t, h, res);
}

}  // namespace

StageData solve_stages(const ButcherTableau& tableau, const RhsFn& rhs, double t,
                       std::span<const double> y, double h) {
  if (!(h > 0.0)) throw DomainError("solve_stages: step size must be positive");
  if (tableau.is_explicit) return solve_explicit(tableau, rhs, t, y, h);
  return solve_implicit(tableau, rhs, t, y, h);
}

std::vector<double> step(const ButcherTableau& tableau, const RhsFn& rhs, double t,
                         std::span<const double> y, double h, StageData* stage_data) {
  StageData stages = solve_stages(tableau, rhs, t, y, h);
  std::vector<double> y_next(y.begin(), y.end());
  const int n = stages.dim;
  for (int i = 0; i < tableau.stages; ++i) {
    const double w = h * tableau.beta[i];
    const double* fi = stages.deriv.data() + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) y_next[j] += w * fi[j];
  }
  if (stage_data != nullptr) *stage_data = std::move(stages);
  return y_next;
}

void dense_step_eval(const ButcherTableau& tableau, const StageData& stage_data,
                     std::span<const double> y, double h, double xi,
                     std::span<double> out) {
  if (xi < 0.0 || xi > 1.0)
    throw DomainError("dense_step_eval: xi must lie in [0,1]");
  const int n = stage_data.dim;
  std::copy(y.begin(), y.end(), out.begin());
  for (int i = 0; i < tableau.stages; ++i) {
    const double w = h * tableau.interp_weight(i, xi);
    const double* fi = stage_data.deriv.data() + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) out[j] += w * fi[j];
  }
}

}  // namespace pdmp
