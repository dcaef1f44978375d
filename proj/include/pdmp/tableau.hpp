#pragma once

#include <string>
#include <vector>

namespace pdmp {

enum class BuiltinTableau { Euler, Trapezoidal, RadauIIA2, LobattoIIIA3 };

/// Coefficients of one continuous (dense-output) Runge-Kutta method.
///
/// Beyond the classical (A, beta, c) the tableau carries one interpolation
/// polynomial b_i(xi) per stage, stored as monomial coefficients and
/// evaluated by Horner's scheme. They satisfy b_i(0) = 0 and b_i(1) = beta_i
/// so the in-step interpolant joins the grid values continuously.
struct ButcherTableau {
  std::string name;
  int stages = 0;
  std::vector<std::vector<double>> a;       // stages x stages
  std::vector<double> beta;                 // stages
  std::vector<double> c;                    // stages
  std::vector<std::vector<double>> interp;  // stages polynomials, coeff of xi^k at [k]
  int declared_order = 0;
  bool is_explicit = false;

  /// b_i(xi)
  double interp_weight(int i, double xi) const;
  /// d/dxi b_i(xi)
  double interp_weight_derivative(int i, double xi) const;
};

/// The four methods used throughout: forward Euler (order 1), continuous
/// trapezoidal rule (order 2), 2-stage RadauIIA (order 3) and 3-stage
/// LobattoIIIA (order 4).
const ButcherTableau& builtin_tableau(BuiltinTableau which);

/// Lookup by CLI name: euler | trapezoidal | radau2 | lobatto3.
BuiltinTableau tableau_from_string(const std::string& name);
const std::string& tableau_cli_name(BuiltinTableau which);
std::vector<std::string> tableau_names();

}  // namespace pdmp
