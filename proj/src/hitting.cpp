#include "pdmp/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdmp/errors.hpp"

namespace pdmp {

namespace {

// Augmented right-hand side (y', theta', w') = (f1, f2, lambda). When theta
// is piecewise constant the integrated vector is reduced to (y, w) and theta
// enters as a frozen parameter; the theta stage equations are then satisfied
// exactly with zero derivatives. The forcing time is frozen per step
// (t_force), which is exact because the flow is autonomous between input
// breakpoints and steps never straddle them.
struct AugmentedRhs {
  const PdmpModel* model;
  bool reduced;
  double t_force = 0.0;
  std::vector<double> packed;  // scratch, size d + m (holds frozen theta when reduced)
  std::vector<double> dflow;   // scratch, size d + m

  AugmentedRhs(const PdmpModel& m, const PdmpState& x0, bool reduced)
      : model(&m), reduced(reduced), packed(x0.packed()),
        dflow(static_cast<std::size_t>(m.dim_d + m.dim_m)) {}

  void operator()(double /*t_stage*/, std::span<const double> x, std::span<double> dx) {
    const int d = model->dim_d;
    const int m = model->dim_m;
    if (reduced) {
      for (int i = 0; i < d; ++i) packed[static_cast<std::size_t>(i)] = x[i];
      model->flow(packed, t_force, dflow);
      for (int i = 0; i < d; ++i) dx[i] = dflow[static_cast<std::size_t>(i)];
      dx[d] = model->intensity(packed, t_force);
    } else {
      std::span<const double> state = x.first(static_cast<std::size_t>(d + m));
      model->flow(state, t_force, dflow);
      for (int i = 0; i < d + m; ++i) dx[i] = dflow[static_cast<std::size_t>(i)];
      dx[d + m] = model->intensity(state, t_force);
    }
  }
};

double dense_w(const ButcherTableau& tb, const StageData& stages, double w_left,
               double h, double xi) {
  const int wi = stages.dim - 1;
  double w = w_left;
  for (int i = 0; i < tb.stages; ++i)
    w += h * tb.interp_weight(i, xi) * stages.deriv[static_cast<std::size_t>(i) * stages.dim + wi];
  return w;
}

}  // namespace

double find_crossing_in_step(const ButcherTableau& tableau, const StageData& stages,
                             double w_left, double h, double threshold) {
  if (!(w_left < threshold))
    throw DomainError("find_crossing_in_step: w_left must lie below the threshold");

  // Pre-scan at xi = j/8: the interpolants have degree <= 3, so eight samples
  // cannot miss a sign change of a hazard with positive mean slope.
  double a = 0.0;
  double g_prev = w_left - threshold;
  double b = std::numeric_limits<double>::quiet_NaN();
  for (int j = 1; j <= 8; ++j) {
    const double xi = static_cast<double>(j) / 8.0;
    const double g = dense_w(tableau, stages, w_left, h, xi) - threshold;
    if (g_prev < 0.0 && g >= 0.0) {
      a = static_cast<double>(j - 1) / 8.0;
      b = xi;
      break;
    }
    g_prev = g;
  }
  if (std::isnan(b)) {
    // Grid value met the threshold but the interpolant stays below it on the
    // whole scan: take the right endpoint (difference is rounding-level).
    const double g1 = dense_w(tableau, stages, w_left, h, 1.0) - threshold;
    if (g1 >= -1e-9 * std::max(1.0, std::abs(threshold))) return 1.0;
    throw NumericalError("find_crossing_in_step: no sign change despite w >= threshold");
  }

  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (a + b);
    if (dense_w(tableau, stages, w_left, h, mid) - threshold >= 0.0) {
      b = mid;
    } else {
      a = mid;
    }
  }
  return b;
}

ThresholdSearch integrate_until_threshold(const PdmpModel& model,
                                          const ButcherTableau& tableau,
                                          const PdmpState& x0, double threshold,
                                          double h, double t_offset, double t_cap,
                                          const IntegrateOptions& opts) {
  if (!(threshold > 0.0))
    throw DomainError("integrate_until_threshold: threshold must be positive");
  if (!(h > 0.0)) throw DomainError("integrate_until_threshold: h must be positive");
  if (!(t_cap > t_offset))
    throw DomainError("integrate_until_threshold: t_cap must exceed t_offset");

  const int d = model.dim_d;
  const int m = model.dim_m;
  const bool reduced = model.theta_piecewise_constant;
  const int n_int = reduced ? d + 1 : d + m + 1;

  ThresholdSearch out;
  DenseSegment& seg = out.segment;
  seg.t_start = t_offset;
  seg.t_end = t_offset;
  seg.dim_d = d;
  seg.dim_m = m;
  if (reduced) seg.theta = x0.theta;

  AugmentedRhs aug(model, x0, reduced);
  RhsFn rhs = [&aug](double t, std::span<const double> x, std::span<double> dx) {
    aug(t, x, dx);
  };

  // Integrated vector: (y, w) reduced, (y, theta, w) otherwise; w starts at 0.
  std::vector<double> state(static_cast<std::size_t>(n_int), 0.0);
  for (int i = 0; i < d; ++i) state[static_cast<std::size_t>(i)] = x0.y[static_cast<std::size_t>(i)];
  if (!reduced)
    for (int i = 0; i < m; ++i)
      state[static_cast<std::size_t>(d + i)] = x0.theta[static_cast<std::size_t>(i)];

  const std::vector<double>& breaks = model.input_breakpoints;
  double t_left = t_offset;

  auto full_state_at = [&](std::span<const double> stored) {
    std::vector<double> full(static_cast<std::size_t>(d + m + 1));
    if (reduced) {
      for (int i = 0; i < d; ++i) full[static_cast<std::size_t>(i)] = stored[static_cast<std::size_t>(i)];
      for (int i = 0; i < m; ++i)
        full[static_cast<std::size_t>(d + i)] = x0.theta[static_cast<std::size_t>(i)];
      full[static_cast<std::size_t>(d + m)] = stored[static_cast<std::size_t>(d)];
    } else {
      std::copy(stored.begin(), stored.end(), full.begin());
    }
    return full;
  };

  while (true) {
    if (t_left >= t_cap) {
      seg.t_end = t_cap;
      seg.end_state = full_state_at(state);
      return out;
    }

    // Step size: h, clipped at the next input breakpoint and at the cap.
    double h_step = h;
    double boundary = std::numeric_limits<double>::infinity();
    auto bp = std::upper_bound(breaks.begin(), breaks.end(), t_left);
    if (bp != breaks.end()) boundary = *bp;
    boundary = std::min(boundary, t_cap);
    bool clipped = false;
    if (t_left + h_step >= boundary) {
      h_step = boundary - t_left;
      clipped = true;
    }
    if (!(h_step > 0.0)) {
      seg.t_end = t_cap;
      seg.end_state = full_state_at(state);
      return out;
    }

    aug.t_force = t_left + 0.5 * h_step;
    const double w_left = state[static_cast<std::size_t>(n_int - 1)];

    StageData stages;
    std::vector<double> state_right = step(tableau, rhs, t_left, state, h_step, &stages);
    const double w_right = state_right[static_cast<std::size_t>(n_int - 1)];
    if (!(w_right > w_left))
      throw NumericalError(
          "integrate_until_threshold: accumulated hazard not increasing at grid "
          "points (t = " + std::to_string(t_left) + ")");

    StepRecord rec;
    rec.t_left = t_left;
    rec.h = h_step;
    rec.state_left = state;
    if (opts.record_dense) rec.stages = stages;

    if (w_right >= threshold) {
      const double xi_star = find_crossing_in_step(tableau, stages, w_left, h_step, threshold);
      const double tau_abs = t_left + xi_star * h_step;
      if (tau_abs < t_cap) {
        std::vector<double> stored(static_cast<std::size_t>(n_int));
        dense_step_eval(tableau, stages, state, h_step, xi_star, stored);
        std::vector<double> full = full_state_at(stored);

        seg.steps.push_back(std::move(rec));
        seg.t_end = tau_abs;
        seg.end_state = full;

        CrossingResult crossing;
        crossing.tau_hat = tau_abs - t_offset;
        crossing.state_at_crossing = PdmpState::unpack(
            std::span<const double>(full.data(), full.size()), d, m);
        crossing.w_at_crossing = full[static_cast<std::size_t>(d + m)];
        out.crossing = crossing;
        return out;
      }
      // Crossing located exactly at the cap: the jump does not happen inside
      // [t_offset, t_cap); fall through and let the cap branch finish.
    }

    seg.steps.push_back(std::move(rec));
    state = std::move(state_right);
    t_left = clipped ? boundary : t_left + h_step;
  }
}

}  // namespace pdmp
