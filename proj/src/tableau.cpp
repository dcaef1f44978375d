#include "pdmp/tableau.hpp"

#include <array>
#include <stdexcept>

#include "pdmp/errors.hpp"

namespace pdmp {

double ButcherTableau::interp_weight(int i, double xi) const {
  const std::vector<double>& p = interp[static_cast<std::size_t>(i)];
  double v = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * xi + *it;
  return v;
}

double ButcherTableau::interp_weight_derivative(int i, double xi) const {
  const std::vector<double>& p = interp[static_cast<std::size_t>(i)];
  double v = 0.0;
  for (std::size_t k = p.size(); k-- > 1;) {
    v = v * xi + static_cast<double>(k) * p[k];
  }
  return v;
}

namespace {

ButcherTableau make_euler() {
  ButcherTableau t;
  t.name = "euler";
  t.stages = 1;
  t.a = {{0.0}};
  t.beta = {1.0};
  t.c = {0.0};
  // b1 = xi
  t.interp = {{0.0, 1.0}};
  t.declared_order = 1;
  t.is_explicit = true;
  return t;
}

ButcherTableau make_trapezoidal() {
  ButcherTableau t;
  t.name = "trapezoidal";
  t.stages = 2;
  t.a = {{0.0, 0.0}, {1.0 / 2.0, 1.0 / 2.0}};
  t.beta = {1.0 / 2.0, 1.0 / 2.0};
  t.c = {0.0, 1.0};
  // b1 = xi(2-xi)/2, b2 = xi^2/2
  t.interp = {{0.0, 1.0, -1.0 / 2.0}, {0.0, 0.0, 1.0 / 2.0}};
  t.declared_order = 2;
  t.is_explicit = false;
  return t;
}

ButcherTableau make_radau2() {
  ButcherTableau t;
  t.name = "radau2";
  t.stages = 2;
  t.a = {{5.0 / 12.0, -1.0 / 12.0}, {3.0 / 4.0, 1.0 / 4.0}};
  t.beta = {3.0 / 4.0, 1.0 / 4.0};
  t.c = {1.0 / 3.0, 1.0};
  // b1 = 3xi(2-xi)/4, b2 = 3xi(xi-2/3)/4
  t.interp = {{0.0, 3.0 / 2.0, -3.0 / 4.0}, {0.0, -1.0 / 2.0, 3.0 / 4.0}};
  t.declared_order = 3;
  t.is_explicit = false;
  return t;
}

ButcherTableau make_lobatto3() {
  ButcherTableau t;
  t.name = "lobatto3";
  t.stages = 3;
  t.a = {{0.0, 0.0, 0.0},
         {5.0 / 24.0, 1.0 / 3.0, -1.0 / 24.0},
         {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}};
  t.beta = {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0};
  t.c = {0.0, 1.0 / 2.0, 1.0};
  // b1 = 2xi(xi^2/3 - 3xi/4 + 1/2), b2 = 4xi^2(1/2 - xi/3), b3 = 2xi^2(xi/3 - 1/4)
  t.interp = {{0.0, 1.0, -3.0 / 2.0, 2.0 / 3.0},
              {0.0, 0.0, 2.0, -4.0 / 3.0},
              {0.0, 0.0, -1.0 / 2.0, 2.0 / 3.0}};
  t.declared_order = 4;
  t.is_explicit = false;
  return t;
}

}  // namespace

const ButcherTableau& builtin_tableau(BuiltinTableau which) {
  static const ButcherTableau euler = make_euler();
  static const ButcherTableau trapezoidal = make_trapezoidal();
  static const ButcherTableau radau2 = make_radau2();
  static const ButcherTableau lobatto3 = make_lobatto3();
  switch (which) {
    case BuiltinTableau::Euler: return euler;
    case BuiltinTableau::Trapezoidal: return trapezoidal;
    case BuiltinTableau::RadauIIA2: return radau2;
    case BuiltinTableau::LobattoIIIA3: return lobatto3;
  }
  throw std::logic_error("unreachable tableau enum");
}

namespace {
const std::array<std::pair<const char*, BuiltinTableau>, 4> kTableauNames = {{
    {"euler", BuiltinTableau::Euler},
    {"trapezoidal", BuiltinTableau::Trapezoidal},
    {"radau2", BuiltinTableau::RadauIIA2},
    {"lobatto3", BuiltinTableau::LobattoIIIA3},
}};
}  // namespace

BuiltinTableau tableau_from_string(const std::string& name) {
  for (const auto& [id, which] : kTableauNames) {
    if (name == id) return which;
  }
  throw ConfigError("unknown tableau '" + name +
                    "' (expected euler | trapezoidal | radau2 | lobatto3)");
}

const std::string& tableau_cli_name(BuiltinTableau which) {
  return builtin_tableau(which).name;
}

std::vector<std::string> tableau_names() {
  std::vector<std::string> out;
  for (const auto& [id, which] : kTableauNames) out.emplace_back(id);
  return out;
}

}  // namespace pdmp
