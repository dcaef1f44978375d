#include "pdmp/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "pdmp/errors.hpp"
#include "pdmp/rng.hpp"

namespace pdmp {

namespace {

double euclidean_distance(const PdmpState& a, const PdmpState& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.y.size(); ++i) {
    const double d = a.y[i] - b.y[i];
    acc += d * d;
  }
  for (std::size_t i = 0; i < a.theta.size(); ++i) {
    const double d = a.theta[i] - b.theta[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double y_distance(const PdmpState& a, const PdmpState& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.y.size(); ++i) {
    const double d = a.y[i] - b.y[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

}  // namespace

ErrorReport compare(const Trajectory& reference, const Trajectory& approx,
                    int n_eval_points) {
  if (reference.horizon != approx.horizon)
    throw PairingError("compare: trajectories have different horizons");
  const double T = reference.horizon;

  const std::size_t n_ref = reference.n_jumps_within(T);
  if (approx.n_jumps() < n_ref)
    throw PairingError(
        "compare: approximation has " + std::to_string(approx.n_jumps()) +
        " jumps but the reference realized " + std::to_string(n_ref) +
        " within [0, T]; rerun the approximation with min_jumps = " +
        std::to_string(n_ref));

  ErrorReport report;
  report.n_jumps_compared = static_cast<int>(n_ref);

  for (std::size_t n = 1; n <= n_ref; ++n) {
    const PdmpState& xr = reference.post_jump_states[n];
    const PdmpState& xa = approx.post_jump_states[n];
    report.err_phase_jumps = std::max(report.err_phase_jumps, euclidean_distance(xr, xa));
    report.err_jump_times = std::max(
        report.err_jump_times, std::abs(reference.jump_times[n] - approx.jump_times[n]));
    if (xr.theta != xa.theta) ++report.discrete_mismatch_count;
  }

  report.err_endpoint = euclidean_distance(reference.eval(T), approx.eval(T));

  const int probes = std::max(2, n_eval_points);
  for (int i = 0; i < probes; ++i) {
    const double t = T * i / (probes - 1);
    report.err_sup_continuous = std::max(
        report.err_sup_continuous, y_distance(reference.eval(t), approx.eval(t)));
  }
  return report;
}

double estimate_order(const std::vector<OrderPoint>& points, double floor) {
  std::vector<OrderPoint> usable;
  int dropped_mismatch = 0;
  int dropped_floor = 0;
  for (const OrderPoint& p : points) {
    if (p.mismatches > 0) {
      ++dropped_mismatch;
      continue;
    }
    if (p.error <= 10.0 * floor || p.error <= 0.0) {
      ++dropped_floor;
      continue;
    }
    usable.push_back(p);
  }
  if (usable.size() < 3)
    throw InsufficientDataError(
        "estimate_order: " + std::to_string(usable.size()) +
        " usable points (need 3); dropped " + std::to_string(dropped_mismatch) +
        " with discrete mismatches, " + std::to_string(dropped_floor) +
        " at or below 10x the reference floor");

  // Least-squares slope of log(error) vs log(h).
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const OrderPoint& p : usable) {
    const double x = std::log(p.h);
    const double y = std::log(p.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(usable.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

StudyResult convergence_study(const PdmpModel& model, const StudyConfig& config) {
  if (config.h_list.empty())
    throw ConfigError("convergence_study: h_list must not be empty");
  for (std::size_t i = 1; i < config.h_list.size(); ++i)
    if (!(config.h_list[i] < config.h_list[i - 1]))
      throw ConfigError("convergence_study: h_list must be strictly decreasing");
  if (config.methods.empty())
    throw ConfigError("convergence_study: no methods given");

  StudyResult result;
  const UniformStream stream(config.seed);

  // Reference trajectory (and its self-consistency floor for filtering).
  Trajectory reference;
  {
    const double start = now_seconds();
    if (config.reference.kind == ReferenceSpec::Kind::Analytic) {
      reference = simulate_exact_analytic(model, config.horizon, stream);
    } else {
      reference = simulate_reference(model, config.horizon, stream,
                                     config.reference.h_ref);
    }
    result.reference_wall_time_s = now_seconds() - start;
  }
  result.reference_jumps = reference.n_jumps_within(config.horizon);

  if (config.reference.kind == ReferenceSpec::Kind::Numeric &&
      config.reference.richardson_floor) {
    // Companion run at twice the reference step: the error of the reference
    // itself is estimated as compare(ref, ref_2h) / (2^p - 1).
    Trajectory companion =
        simulate_reference(model, config.horizon, stream, 2.0 * config.reference.h_ref,
                           reference.n_jumps_within(config.horizon));
    const ErrorReport gap = compare(reference, companion, config.n_eval_points);
    const double scale =
        1.0 / (std::pow(2.0, builtin_tableau(config.reference.tableau).declared_order) - 1.0);
    result.reference_floor.err_phase_jumps = gap.err_phase_jumps * scale;
    result.reference_floor.err_jump_times = gap.err_jump_times * scale;
    result.reference_floor.err_endpoint = gap.err_endpoint * scale;
    result.reference_floor.err_sup_continuous = gap.err_sup_continuous * scale;
  }

  const std::size_t min_jumps = reference.n_jumps_within(config.horizon);

  for (BuiltinTableau method : config.methods) {
    for (double h : config.h_list) {
      SimulationConfig run;
      run.tableau = method;
      run.h = h;
      run.horizon = config.horizon;
      run.seed = config.seed;
      run.min_jumps = min_jumps;

      StudyRow row;
      row.method = method;
      row.h = h;
      const double start = now_seconds();
      const Trajectory approx = simulate_approx(model, run, stream);
      row.report = compare(reference, approx, config.n_eval_points);
      row.wall_time_s = now_seconds() - start;
      result.rows.push_back(std::move(row));
    }
  }

  // Per-method slopes and mismatch-vanishing threshold.
  for (BuiltinTableau method : config.methods) {
    std::vector<const StudyRow*> rows;
    for (const StudyRow& row : result.rows)
      if (row.method == method) rows.push_back(&row);

    MethodSlopes slopes;
    for (auto it = rows.begin(); it != rows.end(); ++it) {
      // h_star: every h' <= h in the list is mismatch-free.
      bool clean_tail = true;
      for (auto jt = it; jt != rows.end(); ++jt)
        if ((*jt)->report.discrete_mismatch_count > 0) clean_tail = false;
      if (clean_tail) {
        slopes.h_star = (*it)->h;
        break;
      }
    }

    auto fit = [&](auto accessor, double floor) -> std::optional<double> {
      std::vector<OrderPoint> pts;
      for (const StudyRow* row : rows)
        pts.push_back({row->h, accessor(row->report),
                       row->report.discrete_mismatch_count});
      try {
        return estimate_order(pts, floor);
      } catch (const InsufficientDataError&) {
        return std::nullopt;
      }
    };
    const ErrorReport& fl = result.reference_floor;
    slopes.phase_jumps =
        fit([](const ErrorReport& r) { return r.err_phase_jumps; }, fl.err_phase_jumps);
    slopes.jump_times =
        fit([](const ErrorReport& r) { return r.err_jump_times; }, fl.err_jump_times);
    slopes.endpoint =
        fit([](const ErrorReport& r) { return r.err_endpoint; }, fl.err_endpoint);
    slopes.sup_continuous = fit(
        [](const ErrorReport& r) { return r.err_sup_continuous; }, fl.err_sup_continuous);

    result.slopes.emplace_back(method, slopes);
  }
  return result;
}

}  // namespace pdmp
