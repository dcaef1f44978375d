#include "pdmp/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdmp/errors.hpp"

namespace pdmp {

namespace {

PdmpModel build_const_rate() {
  PdmpModel model;
  model.id = "const-rate";
  model.dim_d = 1;
  model.dim_m = 1;
  model.theta_piecewise_constant = true;
  model.lambda_floor = 2.0;

  model.flow = [](std::span<const double>, double, std::span<double> dxdt) {
    std::fill(dxdt.begin(), dxdt.end(), 0.0);
  };
  model.intensity = [](std::span<const double>, double) { return 2.0; };

  DiscreteKernel kernel;
  kernel.heights = [](const PdmpState&) {
    // One height: the counter component advances by one.
    return std::vector<WeightedHeight>{{{0.0, 1.0}, 1.0}};
  };
  model.kernel = kernel;

  model.initial_state.y = {0.0};
  model.initial_state.theta = {0.0};

  AnalyticSolution exact;
  exact.flow_map = [](const PdmpState& x, double) { return x; };
  exact.hazard_inverse = [](const PdmpState&, double target) { return target / 2.0; };
  model.analytic = exact;

  model.contains = [](const PdmpState& s) { return std::isfinite(s.theta[0]); };
  return model;
}

// Linear flow with hazard lambda(y) = y and contracting jump map
// y -> (y + 1)/2. Jump times solve y0 tau + tau^2/2 = target in closed form.
PdmpModel build_quadratic_hazard() {
  PdmpModel model;
  model.id = "quad-hazard";
  model.dim_d = 1;
  model.dim_m = 0;
  model.theta_piecewise_constant = true;
  model.lambda_floor = 1.0;

  model.flow = [](std::span<const double>, double, std::span<double> dxdt) {
    dxdt[0] = 1.0;
  };
  model.intensity = [](std::span<const double> x, double) { return x[0]; };

  ContinuousKernel kernel;
  kernel.height = [](const PdmpState& x, double /*u*/) {
    return std::vector<double>{(1.0 - x.y[0]) / 2.0};
  };
  kernel.lipschitz = 0.5;
  model.kernel = kernel;

  model.initial_state.y = {1.0};

  AnalyticSolution exact;
  exact.flow_map = [](const PdmpState& x, double t) {
    PdmpState out = x;
    out.y[0] += t;
    return out;
  };
  exact.hazard_inverse = [](const PdmpState& x, double target) {
    const double y0 = x.y[0];
    return -y0 + std::sqrt(y0 * y0 + 2.0 * target);
  };
  model.analytic = exact;

  model.contains = [](const PdmpState& s) { return s.y[0] >= 1.0; };
  return model;
}

PdmpModel build_markov3() {
  PdmpModel model;
  model.id = "markov3";
  model.dim_d = 1;
  model.dim_m = 1;
  model.theta_piecewise_constant = true;

  const auto& q = markov3_generator();
  double floor = std::numeric_limits<double>::infinity();
  for (int s = 0; s < 3; ++s) floor = std::min(floor, -q[static_cast<std::size_t>(s)][static_cast<std::size_t>(s)]);
  model.lambda_floor = floor;

  model.flow = [](std::span<const double>, double, std::span<double> dxdt) {
    std::fill(dxdt.begin(), dxdt.end(), 0.0);
  };
  model.intensity = [&q](std::span<const double> x, double) {
    const int s = static_cast<int>(x[1]);
    return -q[static_cast<std::size_t>(s)][static_cast<std::size_t>(s)];
  };

  DiscreteKernel kernel;
  kernel.heights = [&q](const PdmpState& x) {
    const int s = static_cast<int>(x.theta[0]);
    const double lambda = -q[static_cast<std::size_t>(s)][static_cast<std::size_t>(s)];
    std::vector<WeightedHeight> out;
    for (int j = 0; j < 3; ++j) {
      if (j == s) continue;
      WeightedHeight wh;
      wh.height = {0.0, static_cast<double>(j - s)};
      wh.probability = q[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)] / lambda;
      out.push_back(std::move(wh));
    }
    return out;
  };
  model.kernel = kernel;

  model.initial_state.y = {0.0};
  model.initial_state.theta = {0.0};

  AnalyticSolution exact;
  exact.flow_map = [](const PdmpState& x, double) { return x; };
  exact.hazard_inverse = [&q](const PdmpState& x, double target) {
    const int s = static_cast<int>(x.theta[0]);
    return target / (-q[static_cast<std::size_t>(s)][static_cast<std::size_t>(s)]);
  };
  model.analytic = exact;

  model.contains = [](const PdmpState& s) {
    const double v = s.theta[0];
    return v == 0.0 || v == 1.0 || v == 2.0;
  };
  return model;
}

}  // namespace

const std::array<std::array<double, 3>, 3>& markov3_generator() {
  static const std::array<std::array<double, 3>, 3> q = {{
      {-1.0, 0.4, 0.6},
      {0.5, -1.2, 0.7},
      {0.3, 0.9, -1.2},
  }};
  return q;
}

PdmpModel build_toy_model(ToyKind kind) {
  switch (kind) {
    case ToyKind::ConstRate: return build_const_rate();
    case ToyKind::QuadraticHazard: return build_quadratic_hazard();
    case ToyKind::PureMarkovChain: return build_markov3();
  }
  throw ModelError("build_toy_model: unknown kind");
}

PdmpModel build_model(const std::string& id) {
  if (id == "hh-p1") return build_hh_model(HHParams::defaults(HHSet::P1), HHSet::P1);
  if (id == "hh-p2") return build_hh_model(HHParams::defaults(HHSet::P2), HHSet::P2);
  if (id == "const-rate") return build_toy_model(ToyKind::ConstRate);
  if (id == "quad-hazard") return build_toy_model(ToyKind::QuadraticHazard);
  if (id == "markov3") return build_toy_model(ToyKind::PureMarkovChain);
  throw ModelError("unknown model id '" + id + "'");
}

PdmpModel build_model(const std::string& id, const HHParams& hh_overrides) {
  if (id == "hh-p1") return build_hh_model(hh_overrides, HHSet::P1);
  if (id == "hh-p2") return build_hh_model(hh_overrides, HHSet::P2);
  return build_model(id);
}

std::vector<std::string> model_ids() {
  return {"hh-p1", "hh-p2", "const-rate", "quad-hazard", "markov3"};
}

}  // namespace pdmp
