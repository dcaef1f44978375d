#include <doctest.h>

#include <cmath>
#include <numeric>

#include "pdmp/errors.hpp"
#include "pdmp/tableau.hpp"

using pdmp::builtin_tableau;
using pdmp::BuiltinTableau;
using pdmp::ButcherTableau;

namespace {
const BuiltinTableau kAll[] = {BuiltinTableau::Euler, BuiltinTableau::Trapezoidal,
                               BuiltinTableau::RadauIIA2, BuiltinTableau::LobattoIIIA3};
}

TEST_CASE("weights sum to one") {
  for (BuiltinTableau which : kAll) {
    const ButcherTableau& t = builtin_tableau(which);
    const double sum = std::accumulate(t.beta.begin(), t.beta.end(), 0.0);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("interpolants vanish at xi = 0 and join the weights at xi = 1") {
  for (BuiltinTableau which : kAll) {
    const ButcherTableau& t = builtin_tableau(which);
    for (int i = 0; i < t.stages; ++i) {
      CHECK(t.interp_weight(i, 0.0) == 0.0);
      CHECK(t.interp_weight(i, 1.0) == doctest::Approx(t.beta[i]).epsilon(1e-15));
    }
  }
}

TEST_CASE("stage abscissae are the row sums of A") {
  for (BuiltinTableau which : kAll) {
    const ButcherTableau& t = builtin_tableau(which);
    for (int i = 0; i < t.stages; ++i) {
      const double row = std::accumulate(t.a[i].begin(), t.a[i].end(), 0.0);
      CHECK(row == doctest::Approx(t.c[i]).epsilon(1e-15));
    }
  }
}

TEST_CASE("paper coefficients: trapezoidal interpolant endpoint values") {
  const ButcherTableau& t = builtin_tableau(BuiltinTableau::Trapezoidal);
  CHECK(t.interp_weight(0, 1.0) == 0.5);
  CHECK(t.interp_weight(1, 1.0) == 0.5);
  CHECK(t.c[0] == 0.0);
  CHECK(t.c[1] == 1.0);
  CHECK(t.a[1][0] == 0.5);
  CHECK(t.a[1][1] == 0.5);
}

TEST_CASE("paper coefficients: lobatto interpolant endpoint arithmetic") {
  const ButcherTableau& t = builtin_tableau(BuiltinTableau::LobattoIIIA3);
  // b1(1) = 2(1/3 - 3/4 + 1/2) = 1/6, b2(1) = 4(1/2 - 1/3) = 2/3,
  // b3(1) = 2(1/3 - 1/4) = 1/6.
  CHECK(t.interp_weight(0, 1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(t.interp_weight(1, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(t.interp_weight(2, 1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("radau weights") {
  const ButcherTableau& t = builtin_tableau(BuiltinTableau::RadauIIA2);
  CHECK(t.beta[0] == 0.75);
  CHECK(t.beta[1] == 0.25);
  CHECK(t.beta[0] + t.beta[1] == 1.0);
  CHECK(t.c[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
}

TEST_CASE("explicit flags and declared orders") {
  CHECK(builtin_tableau(BuiltinTableau::Euler).is_explicit);
  CHECK(!builtin_tableau(BuiltinTableau::Trapezoidal).is_explicit);
  CHECK(!builtin_tableau(BuiltinTableau::RadauIIA2).is_explicit);
  CHECK(!builtin_tableau(BuiltinTableau::LobattoIIIA3).is_explicit);
  CHECK(builtin_tableau(BuiltinTableau::Euler).declared_order == 1);
  CHECK(builtin_tableau(BuiltinTableau::Trapezoidal).declared_order == 2);
  CHECK(builtin_tableau(BuiltinTableau::RadauIIA2).declared_order == 3);
  CHECK(builtin_tableau(BuiltinTableau::LobattoIIIA3).declared_order == 4);
}

TEST_CASE("cli names round-trip and bad names are rejected") {
  for (BuiltinTableau which : kAll)
    CHECK(pdmp::tableau_from_string(pdmp::tableau_cli_name(which)) == which);
  CHECK_THROWS_AS(pdmp::tableau_from_string("rk4"), pdmp::ConfigError);
}
