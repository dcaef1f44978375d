#include "pdmp/simulate.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pdmp/errors.hpp"
#include "pdmp/hitting.hpp"

namespace pdmp {

namespace {

PdmpState apply_height(const PdmpState& pre, std::span<const double> height) {
  PdmpState post = pre;
  const int d = pre.dim_d();
  for (int i = 0; i < d; ++i) post.y[static_cast<std::size_t>(i)] += height[static_cast<std::size_t>(i)];
  for (int i = 0; i < pre.dim_m(); ++i)
    post.theta[static_cast<std::size_t>(i)] += height[static_cast<std::size_t>(d + i)];
  return post;
}

}  // namespace

Trajectory simulate_approx(const PdmpModel& model, const SimulationConfig& cfg,
                           const UniformSource& stream) {
  if (!(cfg.h > 0.0)) throw ConfigError("simulate_approx: h must be positive");
  if (!(cfg.horizon > 0.0)) throw ConfigError("simulate_approx: horizon must be positive");

  const ButcherTableau& tb = builtin_tableau(cfg.tableau);
  const double T = cfg.horizon;
  const std::size_t min_jumps = cfg.min_jumps.value_or(0);

  Trajectory traj;
  traj.horizon = T;
  traj.dim_d = model.dim_d;
  traj.dim_m = model.dim_m;
  traj.tableau = tb;
  traj.jump_times.push_back(0.0);
  traj.post_jump_states.push_back(model.initial_state);

  IntegrateOptions opts;
  opts.record_dense = cfg.record_dense;

  PdmpState x = model.initial_state;
  double t_prev = 0.0;
  std::size_t n = 1;  // jump counter

  while (true) {
    const std::size_t jumps = traj.n_jumps();
    if (t_prev >= T && jumps >= min_jumps) break;

    const bool need_more = jumps < min_jumps;
    const double t_cap = need_more ? std::numeric_limits<double>::infinity() : T;

    const double threshold = -std::log(stream.at(2 * n - 2));
    ThresholdSearch search;
    try {
      search = integrate_until_threshold(model, tb, x, threshold, cfg.h, t_prev,
                                         t_cap, opts);
    } catch (const SimulationError& e) {
      throw NumericalError("simulate_approx: jump " + std::to_string(n) +
                           " from t = " + std::to_string(t_prev) + ": " + e.what());
    }

    if (!search.crossing.has_value()) {
      // Horizon reached first: final partial segment, no uniforms consumed
      // for the uncompleted jump, partially accumulated hazard discarded.
      traj.segments.push_back(std::move(search.segment));
      break;
    }

    const PdmpState pre = search.crossing->state_at_crossing;
    const double t_n = search.segment.t_end;
    int height_index = -1;
    const std::vector<double> height =
        sample_jump_height(model.kernel, pre, stream.at(2 * n - 1), &height_index);
    const PdmpState post = apply_height(pre, height);

    traj.segments.push_back(std::move(search.segment));
    traj.jump_times.push_back(t_n);
    traj.pre_jump_states.push_back(pre);
    traj.post_jump_states.push_back(post);
    traj.height_indices.push_back(height_index);
    traj.draws_consumed += 2;

    x = post;
    t_prev = t_n;
    ++n;
  }
  return traj;
}

Trajectory simulate_exact_analytic(const PdmpModel& model, double horizon,
                                   const UniformSource& stream,
                                   std::optional<std::size_t> min_jumps_opt) {
  if (!model.analytic.has_value())
    throw ModelError("simulate_exact_analytic: model '" + model.id +
                     "' has no analytic flow/hazard inverse");
  if (!model.input_breakpoints.empty())
    throw ModelError("simulate_exact_analytic: time-dependent forcing not supported");
  if (!(horizon > 0.0))
    throw ConfigError("simulate_exact_analytic: horizon must be positive");

  const AnalyticSolution& exact = *model.analytic;
  const double T = horizon;
  const std::size_t min_jumps = min_jumps_opt.value_or(0);

  Trajectory traj;
  traj.horizon = T;
  traj.dim_d = model.dim_d;
  traj.dim_m = model.dim_m;
  traj.jump_times.push_back(0.0);
  traj.post_jump_states.push_back(model.initial_state);
  traj.analytic_flow = exact.flow_map;

  PdmpState x = model.initial_state;
  double t_prev = 0.0;
  std::size_t n = 1;

  auto make_segment = [&](double t_start, double t_end, const PdmpState& end_state,
                          double w_end) {
    DenseSegment seg;
    seg.t_start = t_start;
    seg.t_end = t_end;
    seg.dim_d = model.dim_d;
    seg.dim_m = model.dim_m;
    seg.theta = x.theta;
    seg.end_state = end_state.packed();
    seg.end_state.push_back(w_end);
    return seg;
  };

  while (true) {
    const std::size_t jumps = traj.n_jumps();
    if (t_prev >= T && jumps >= min_jumps) break;

    const bool need_more = jumps < min_jumps;
    const double t_cap = need_more ? std::numeric_limits<double>::infinity() : T;

    const double threshold = -std::log(stream.at(2 * n - 2));
    const double tau = exact.hazard_inverse(x, threshold);
    const double t_n = t_prev + tau;

    if (t_n >= t_cap) {
      traj.segments.push_back(make_segment(t_prev, T, exact.flow_map(x, T - t_prev),
                                           /*w_end=*/0.0));
      break;
    }

    const PdmpState pre = exact.flow_map(x, tau);
    int height_index = -1;
    const std::vector<double> height =
        sample_jump_height(model.kernel, pre, stream.at(2 * n - 1), &height_index);
    const PdmpState post = apply_height(pre, height);

    traj.segments.push_back(make_segment(t_prev, t_n, pre, threshold));
    traj.jump_times.push_back(t_n);
    traj.pre_jump_states.push_back(pre);
    traj.post_jump_states.push_back(post);
    traj.height_indices.push_back(height_index);
    traj.draws_consumed += 2;

    x = post;
    t_prev = t_n;
    ++n;
  }
  return traj;
}

Trajectory simulate_reference(const PdmpModel& model, double horizon,
                              const UniformSource& stream, double h_ref,
                              std::optional<std::size_t> min_jumps) {
  SimulationConfig cfg;
  cfg.tableau = BuiltinTableau::LobattoIIIA3;
  cfg.h = h_ref;
  cfg.horizon = horizon;
  cfg.min_jumps = min_jumps;
  return simulate_approx(model, cfg, stream);
}

}  // namespace pdmp
