#include <doctest.h>

#include <cmath>
#include <vector>

#include "pdmp/crk.hpp"
#include "pdmp/errors.hpp"
#include "pdmp/tableau.hpp"

using namespace pdmp;

namespace {

const BuiltinTableau kAll[] = {BuiltinTableau::Euler, BuiltinTableau::Trapezoidal,
                               BuiltinTableau::RadauIIA2, BuiltinTableau::LobattoIIIA3};

RhsFn scalar_rhs(double (*f)(double t, double y)) {
  return [f](double t, std::span<const double> y, std::span<double> dydt) {
    dydt[0] = f(t, y[0]);
  };
}

double endpoint_error_exp(const ButcherTableau& tb, double h) {
  // y' = y, y(0) = 1 on [0,1]; error at the right endpoint.
  RhsFn rhs = scalar_rhs([](double, double y) { return y; });
  std::vector<double> y = {1.0};
  const int n = static_cast<int>(std::round(1.0 / h));
  for (int i = 0; i < n; ++i) y = step(tb, rhs, i * h, y, h);
  return std::abs(y[0] - std::exp(1.0));
}

double dense_error_exp(const ButcherTableau& tb, double h) {
  // Max over 100 interior sample points per step interval path of |y^ - e^t|.
  RhsFn rhs = scalar_rhs([](double, double y) { return y; });
  std::vector<double> y = {1.0};
  const int n = static_cast<int>(std::round(1.0 / h));
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    StageData stages;
    std::vector<double> y_next = step(tb, rhs, i * h, y, h, &stages);
    for (int j = 0; j <= 100; ++j) {
      const double xi = j / 100.0;
      std::vector<double> out(1);
      dense_step_eval(tb, stages, y, h, xi, out);
      worst = std::max(worst, std::abs(out[0] - std::exp((i + xi) * h)));
    }
    y = y_next;
  }
  return worst;
}

}  // namespace

TEST_CASE("constant rhs: all stage derivatives equal the constant") {
  RhsFn rhs = [](double, std::span<const double>, std::span<double> d) {
    d[0] = 3.5;
    d[1] = -2.0;
  };
  std::vector<double> y = {1.0, 2.0};
  for (BuiltinTableau which : kAll) {
    const ButcherTableau& tb = builtin_tableau(which);
    StageData stages = solve_stages(tb, rhs, 0.0, y, 0.25);
    for (int i = 0; i < tb.stages; ++i) {
      CHECK(stages.stage(i)[0] == doctest::Approx(3.5).epsilon(1e-14));
      CHECK(stages.stage(i)[1] == doctest::Approx(-2.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("trapezoidal stage equation has the closed-form solution") {
  // rhs = y, y = 1, h = 0.1: k2 = 1 + 0.05 (1 + k2)  =>  k2 = 1.05 / 0.95.
  RhsFn rhs = scalar_rhs([](double, double y) { return y; });
  std::vector<double> y = {1.0};
  StageData stages =
      solve_stages(builtin_tableau(BuiltinTableau::Trapezoidal), rhs, 0.0, y, 0.1);
  CHECK(stages.stage(0)[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(stages.stage(1)[0] == doctest::Approx(1.05 / 0.95).epsilon(1e-12));
}

TEST_CASE("radau stages match a direct 2x2 linear solve") {
  // rhs = lam*y: stage values solve (I - h lam A) k = y 1.
  const double lam = -1.7;
  const double h = 0.2;
  const double y0 = 0.8;
  const ButcherTableau& tb = builtin_tableau(BuiltinTableau::RadauIIA2);

  // Brute-force oracle: solve the 2x2 system by Cramer's rule.
  const double m11 = 1.0 - h * lam * tb.a[0][0];
  const double m12 = -h * lam * tb.a[0][1];
  const double m21 = -h * lam * tb.a[1][0];
  const double m22 = 1.0 - h * lam * tb.a[1][1];
  const double det = m11 * m22 - m12 * m21;
  const double k1 = (y0 * m22 - y0 * m12) / det;
  const double k2 = (m11 * y0 - m21 * y0) / det;

  RhsFn rhs = [lam](double, std::span<const double> y, std::span<double> d) {
    d[0] = lam * y[0];
  };
  std::vector<double> y = {y0};
  StageData stages = solve_stages(tb, rhs, 0.0, y, h);
  CHECK(stages.stage(0)[0] == doctest::Approx(lam * k1).epsilon(1e-11));
  CHECK(stages.stage(1)[0] == doctest::Approx(lam * k2).epsilon(1e-11));
}

TEST_CASE("zero rhs leaves the state unchanged") {
  RhsFn rhs = [](double, std::span<const double>, std::span<double> d) { d[0] = 0.0; };
  std::vector<double> y = {4.25};
  for (BuiltinTableau which : kAll) {
    std::vector<double> out = step(builtin_tableau(which), rhs, 0.0, y, 0.3);
    CHECK(out[0] == 4.25);
  }
}

TEST_CASE("unit rhs advances by exactly h for every method") {
  RhsFn rhs = [](double, std::span<const double>, std::span<double> d) { d[0] = 1.0; };
  std::vector<double> y = {2.0};
  for (BuiltinTableau which : kAll) {
    std::vector<double> out = step(builtin_tableau(which), rhs, 0.0, y, 0.25);
    CHECK(out[0] == doctest::Approx(2.25).epsilon(1e-15));
  }
}

TEST_CASE("lobatto local error on y' = y is fifth order") {
  RhsFn rhs = scalar_rhs([](double, double y) { return y; });
  const ButcherTableau& tb = builtin_tableau(BuiltinTableau::LobattoIIIA3);
  auto local_err = [&](double h) {
    std::vector<double> y = {1.0};
    std::vector<double> out = step(tb, rhs, 0.0, y, h);
    return std::abs(out[0] - std::exp(h));
  };
  // Step-halving oracle for the local error constant.
  const double c_est = local_err(0.05) / std::pow(0.05, 5);
  CHECK(local_err(0.1) <= 4.0 * c_est * std::pow(0.1, 5));
}

TEST_CASE("dense evaluation endpoints") {
  RhsFn rhs = scalar_rhs([](double t, double) { return std::sin(t) + 1.0; });
  std::vector<double> y = {0.5};
  for (BuiltinTableau which : kAll) {
    const ButcherTableau& tb = builtin_tableau(which);
    StageData stages;
    std::vector<double> y_next = step(tb, rhs, 0.3, y, 0.2, &stages);
    std::vector<double> out(1);
    dense_step_eval(tb, stages, y, 0.2, 0.0, out);
    CHECK(out[0] == 0.5);  // b_i(0) = 0
    dense_step_eval(tb, stages, y, 0.2, 1.0, out);
    CHECK(out[0] == doctest::Approx(y_next[0]).epsilon(1e-15));  // b_i(1) = beta_i
    CHECK_THROWS_AS(dense_step_eval(tb, stages, y, 0.2, 1.5, out), DomainError);
    CHECK_THROWS_AS(dense_step_eval(tb, stages, y, 0.2, -0.1, out), DomainError);
  }
}

TEST_CASE("trapezoidal dense value reproduces the integral of t at xi = 1/2") {
  // rhs(t, y) = t from y(0) = 0 with h = 1: the interpolant at xi = 1/2 gives
  // b1(1/2)*0 + b2(1/2)*1 = 1/8, the exact value of the integral.
  RhsFn rhs = scalar_rhs([](double t, double) { return t; });
  const ButcherTableau& tb = builtin_tableau(BuiltinTableau::Trapezoidal);
  std::vector<double> y = {0.0};
  StageData stages;
  step(tb, rhs, 0.0, y, 1.0, &stages);
  std::vector<double> out(1);
  dense_step_eval(tb, stages, y, 1.0, 0.5, out);
  CHECK(out[0] == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("global grid order on y' = y matches the declared order") {
  for (BuiltinTableau which : kAll) {
    const ButcherTableau& tb = builtin_tableau(which);
    const int p = tb.declared_order;
    for (int k = 4; k < 8; ++k) {
      const double h = std::pow(2.0, -k);
      const double ratio = endpoint_error_exp(tb, h) / endpoint_error_exp(tb, h / 2);
      const double observed = std::log2(ratio);
      CHECK(observed > p - 0.3);
      CHECK(observed < p + 0.3);
    }
  }
}

TEST_CASE("uniform dense order on y' = y matches the declared order") {
  for (BuiltinTableau which : kAll) {
    const ButcherTableau& tb = builtin_tableau(which);
    const int p = tb.declared_order;
    for (int k = 4; k < 7; ++k) {
      const double h = std::pow(2.0, -k);
      const double observed = std::log2(dense_error_exp(tb, h) / dense_error_exp(tb, h / 2));
      CHECK(observed > p - 0.3);
      CHECK(observed < p + 0.3);
    }
  }
}

TEST_CASE("dense output is Lipschitz in t with a rhs-bound constant") {
  // For bounded rhs the interpolant satisfies |y^(t) - y^(s)| <=
  // max|f| * max_xi sum_i |b_i'(xi)| * |t - s|.
  RhsFn rhs = scalar_rhs([](double t, double y) { return std::cos(3 * t) - 0.5 * y; });
  const double h = 0.25;
  for (BuiltinTableau which : kAll) {
    const ButcherTableau& tb = builtin_tableau(which);

    double max_f = 0.0;
    double max_bsum = 0.0;
    for (int j = 0; j <= 1000; ++j) {
      const double xi = j / 1000.0;
      double bsum = 0.0;
      for (int i = 0; i < tb.stages; ++i)
        bsum += std::abs(tb.interp_weight_derivative(i, xi));
      max_bsum = std::max(max_bsum, bsum);
    }

    std::vector<double> y = {1.0};
    StageData stages;
    step(tb, rhs, 0.0, y, h, &stages);
    for (int i = 0; i < tb.stages; ++i)
      max_f = std::max(max_f, std::abs(stages.stage(i)[0]));
    const double lipschitz = max_f * max_bsum;

    std::vector<double> a(1), b(1);
    for (int j = 0; j < 200; ++j) {
      const double s = j / 200.0;
      const double t = (j + 1) / 200.0;
      dense_step_eval(tb, stages, y, h, s, a);
      dense_step_eval(tb, stages, y, h, t, b);
      const double quotient = std::abs(b[0] - a[0]) / (h * (t - s));
      CHECK(quotient <= lipschitz * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("step size must be positive") {
  RhsFn rhs = [](double, std::span<const double>, std::span<double> d) { d[0] = 1.0; };
  std::vector<double> y = {0.0};
  CHECK_THROWS_AS(solve_stages(builtin_tableau(BuiltinTableau::Euler), rhs, 0.0, y, 0.0),
                  DomainError);
}
