#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace pdmp {

/// State of a PDMP: continuous component y (length d) and jump-bearing
/// component theta (length m, integer-valued for discrete kernels).
struct PdmpState {
  std::vector<double> y;
  std::vector<double> theta;

  int dim_d() const { return static_cast<int>(y.size()); }
  int dim_m() const { return static_cast<int>(theta.size()); }

  /// Flat (y, theta) vector of length d + m.
  std::vector<double> packed() const;
  static PdmpState unpack(std::span<const double> x, int d, int m);
};

/// One possible jump height with its point probability.
struct WeightedHeight {
  std::vector<double> height;  // length d + m, added to the pre-jump state
  double probability = 0.0;
};

/// Discretely supported jump kernel: enumerates the heights with their point
/// probabilities at a given pre-jump state. The enumeration order is fixed
/// per model; the inverse-CDF map depends on it.
struct DiscreteKernel {
  std::function<std::vector<WeightedHeight>(const PdmpState&)> heights;
};

/// Continuously distributed jump kernel given directly as the inverse-CDF map
/// H(x, u) with a declared Lipschitz constant in x.
struct ContinuousKernel {
  std::function<std::vector<double>(const PdmpState&, double u)> height;
  double lipschitz = 0.0;
};

using JumpKernel = std::variant<DiscreteKernel, ContinuousKernel>;

/// Exact flow map and hazard inverse for models with closed-form solutions;
/// enables the exact simulation path.
struct AnalyticSolution {
  /// phi(t, x): exact solution of the inter-jump ODE after time t from x.
  std::function<PdmpState(const PdmpState&, double t)> flow_map;
  /// Smallest tau with integral_0^tau lambda(phi(s, x)) ds = target.
  std::function<double(const PdmpState&, double target)> hazard_inverse;
};

/// The characteristic triple (flow, intensity, jump kernel) plus phase-space
/// metadata. Flow and intensity operate on the packed (y, theta) vector; the
/// time argument matters only through piecewise-constant forcing, which is
/// constant between consecutive input_breakpoints.
struct PdmpModel {
  std::string id;
  int dim_d = 0;
  int dim_m = 0;

  /// Writes the d+m derivatives (f1, f2); f2 is identically zero for models
  /// with piecewise-constant theta.
  std::function<void(std::span<const double> x, double t, std::span<double> dxdt)> flow;
  /// Instantaneous jump rate lambda(x) > 0.
  std::function<double(std::span<const double> x, double t)> intensity;
  JumpKernel kernel;

  /// Sorted times where the forcing I(t) is discontinuous; integration steps
  /// never straddle them.
  std::vector<double> input_breakpoints;

  /// Declared positive lower bound on the intensity (from a pre-simulation
  /// state sweep for models where no proof is available).
  double lambda_floor = 0.0;

  PdmpState initial_state;

  /// True when f2 == 0, i.e. theta is constant between jumps. Lets dense
  /// segments store only the (y, w) blocks per step.
  bool theta_piecewise_constant = true;

  std::optional<AnalyticSolution> analytic;

  /// Phase-space membership predicate, used in debug assertions.
  std::function<bool(const PdmpState&)> contains;
};

/// Inverse-CDF jump height map. Discrete kernels realize H by binning (0,1)
/// with the cumulative point probabilities in enumeration order; continuous
/// kernels delegate to their H directly.
///
/// Throws DomainError for u outside (0,1) and ModelError when a discrete
/// kernel's probabilities do not sum to 1 within 1e-12.
std::vector<double> sample_jump_height(const JumpKernel& kernel, const PdmpState& x,
                                       double u);

/// Same as sample_jump_height but also reports the enumeration index of the
/// realized height (-1 for continuous kernels).
std::vector<double> sample_jump_height(const JumpKernel& kernel, const PdmpState& x,
                                       double u, int* height_index);

}  // namespace pdmp
