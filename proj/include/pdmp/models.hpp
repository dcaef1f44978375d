#pragma once

#include <array>
#include <string>
#include <vector>

#include "pdmp/core.hpp"

namespace pdmp {

enum class HHSet { P1, P2 };

/// Membrane and channel constants. Units follow the source tables verbatim
/// (per-channel conductances in pS, leak in mS/cm^2, capacitance in uF/cm^2,
/// input in pA, times in ms); the resulting ODE coefficients are used as-is.
struct HHParams {
  double e_na = 0.0, e_k = 0.0, e_l = 0.0;  // reversal potentials (mV)
  double g_na = 0.0, g_k = 0.0;             // per-channel conductances
  double g_l = 0.0;                         // leak conductance
  double c = 1.0;                           // membrane capacitance
  int n_na = 0, n_k = 0;                    // channel counts
  double input_amplitude = 0.0;             // monophasic input strength
  double input_on = 0.0, input_off = 0.0;   // input window (on, off]

  static HHParams defaults(HHSet set);
};

struct HHRates {
  double a_m = 0.0, b_m = 0.0, a_h = 0.0, b_h = 0.0, a_n = 0.0, b_n = 0.0;
};

/// Voltage-dependent transition rates. Removable singularities are evaluated
/// through the stable form z/(e^z - 1) with limit 1 at z = 0.
HHRates hh_rates(HHSet set, double y);

/// Deterministic rest allocation of the channels: largest-remainder rounding
/// of the stationary per-channel distribution at y = 0.
std::vector<double> hh_initial_theta(const HHParams& params, HHSet set);

/// Full stochastic membrane model: d = 1 (potential), m = 13 (channel-state
/// occupancies; the K block stays zero when n_k = 0).
PdmpModel build_hh_model(const HHParams& params, HHSet set);

enum class ToyKind { ConstRate, QuadraticHazard, PureMarkovChain };

/// Analytic oracle models: constant-rate counter, linear-flow model with
/// hazard lambda(y) = y, and a 3-state Markov chain (the SSA degenerate case).
/// All three carry closed-form flow maps and hazard inverses.
PdmpModel build_toy_model(ToyKind kind);

/// Generator matrix of the PureMarkovChain toy (row sums are zero).
const std::array<std::array<double, 3>, 3>& markov3_generator();

/// Model registry: hh-p1 | hh-p2 | const-rate | quad-hazard | markov3.
PdmpModel build_model(const std::string& id);
PdmpModel build_model(const std::string& id, const HHParams& hh_overrides);
std::vector<std::string> model_ids();

}  // namespace pdmp
