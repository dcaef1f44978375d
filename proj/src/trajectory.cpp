#include "pdmp/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "pdmp/errors.hpp"

namespace pdmp {

std::vector<double> DenseSegment::eval_augmented(const ButcherTableau& tableau,
                                                 double t) const {
  if (t < t_start - 1e-12 || t > t_end + 1e-12)
    throw DomainError("DenseSegment::eval_augmented: t outside segment");
  t = std::clamp(t, t_start, t_end);
  if (steps.empty()) throw NumericalError("segment has no recorded steps");

  // Last step whose left grid point is <= t.
  auto it = std::upper_bound(steps.begin(), steps.end(), t,
                             [](double v, const StepRecord& s) { return v < s.t_left; });
  const StepRecord& rec = (it == steps.begin()) ? steps.front() : *(it - 1);

  const int nd = stored_dim();
  std::vector<double> stored(static_cast<std::size_t>(nd));
  const double xi = std::clamp((t - rec.t_left) / rec.h, 0.0, 1.0);
  if (xi == 0.0) {
    stored = rec.state_left;
  } else {
    if (rec.stages.deriv.empty())
      throw NumericalError("dense evaluation requested but stage data was not recorded");
    dense_step_eval(tableau, rec.stages, rec.state_left, rec.h, xi, stored);
  }

  // Assemble the full (y, theta, w) vector.
  std::vector<double> full(static_cast<std::size_t>(dim_d + dim_m + 1));
  if (theta_is_constant()) {
    for (int i = 0; i < dim_d; ++i) full[i] = stored[i];
    for (int i = 0; i < dim_m; ++i) full[dim_d + i] = theta[i];
    full[dim_d + dim_m] = stored[dim_d];
  } else {
    full.assign(stored.begin(), stored.end());
  }
  return full;
}

std::size_t Trajectory::segment_index(double t) const {
  auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
  std::size_t n = static_cast<std::size_t>(it - jump_times.begin());
  if (n > 0) --n;
  // A trajectory that ends exactly on its last jump has no segment after it.
  if (n >= segments.size()) n = segments.size() - 1;
  return n;
}

std::size_t Trajectory::n_jumps_within(double t) const {
  std::size_t count = 0;
  for (std::size_t n = 1; n < jump_times.size(); ++n)
    if (jump_times[n] <= t) ++count;
  return count;
}

PdmpState Trajectory::eval(double t) const {
  if (t < 0.0 || t > horizon)
    throw DomainError("Trajectory::eval: t outside [0, horizon]");

  // Largest n with jump_times[n] <= t.
  auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
  std::size_t n = static_cast<std::size_t>(it - jump_times.begin());
  if (n > 0) --n;

  // Right-continuity at jump times: return the stored post-jump state.
  if (t == jump_times[n]) return post_jump_states[n];

  if (is_analytic()) {
    return analytic_flow(post_jump_states[n], t - jump_times[n]);
  }
  const DenseSegment& seg = segments[n];
  const std::vector<double> full = seg.eval_augmented(tableau, t);
  return PdmpState::unpack(std::span<const double>(full.data(), full.size()), dim_d,
                           dim_m);
}

}  // namespace pdmp
