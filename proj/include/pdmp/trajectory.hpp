#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pdmp/core.hpp"
#include "pdmp/crk.hpp"
#include "pdmp/tableau.hpp"

namespace pdmp {

/// One integration step of the augmented system inside a dense segment.
///
/// state_left / stage_deriv hold the stored component block: (y, w) when the
/// segment's theta is piecewise constant, the full (y, theta, w) otherwise.
/// The dense formula over this step is valid for xi = (t - t_left)/h in
/// [0,1]; the segment may end strictly inside the step (threshold crossing
/// or horizon cap).
struct StepRecord {
  double t_left = 0.0;  // absolute time of the step's left grid point
  double h = 0.0;       // step size used in the dense formula
  std::vector<double> state_left;
  StageData stages;  // empty deriv when dense recording is off
};

/// Dense record of one inter-jump interval (or the final partial interval).
struct DenseSegment {
  double t_start = 0.0;
  double t_end = 0.0;
  int dim_d = 0;
  int dim_m = 0;
  /// Theta block shared by every step; empty when steps carry it themselves.
  std::vector<double> theta;
  std::vector<StepRecord> steps;
  /// Augmented (y, theta, w) state at t_end, dense-evaluated once.
  std::vector<double> end_state;

  bool theta_is_constant() const { return !theta.empty() || dim_m == 0; }
  int stored_dim() const { return theta_is_constant() ? dim_d + 1 : dim_d + dim_m + 1; }

  /// Augmented (y, theta, w) state at absolute time t in [t_start, t_end].
  std::vector<double> eval_augmented(const ButcherTableau& tableau, double t) const;
};

/// A simulated path: jump times, pre/post-jump states, and dense inter-jump
/// segments supporting evaluation at any t in [0, horizon]. Right-continuous:
/// evaluation at a jump time returns the post-jump state.
struct Trajectory {
  double horizon = 0.0;
  int dim_d = 0;
  int dim_m = 0;

  /// t_0 = 0 followed by the jump times (which may extend past the horizon
  /// when a minimum jump count was requested for pairing).
  std::vector<double> jump_times;
  /// Aligned with jump_times; entry 0 is the initial state.
  std::vector<PdmpState> post_jump_states;
  /// Pre-jump states phi-hat(tau-hat) per jump, aligned with jump_times[1..].
  std::vector<PdmpState> pre_jump_states;
  /// Enumeration index of the realized height per jump (-1 for continuous kernels).
  std::vector<int> height_indices;

  /// One segment per inter-jump interval, plus a final partial segment to the
  /// horizon when the path did not end on a jump.
  std::vector<DenseSegment> segments;

  std::uint64_t draws_consumed = 0;

  ButcherTableau tableau;  // method that produced the path (empty for analytic)

  /// Exact flow map for analytically simulated paths; empty for RK paths.
  std::function<PdmpState(const PdmpState&, double)> analytic_flow;

  std::size_t n_jumps() const { return jump_times.size() - 1; }
  std::size_t n_jumps_within(double t) const;
  bool is_analytic() const { return static_cast<bool>(analytic_flow); }

  /// Dense evaluation of (y, theta) at t in [0, horizon].
  PdmpState eval(double t) const;

  /// Index of the segment containing t (right-continuous convention).
  std::size_t segment_index(double t) const;
};

}  // namespace pdmp
