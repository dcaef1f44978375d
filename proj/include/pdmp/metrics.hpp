#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdmp/core.hpp"
#include "pdmp/simulate.hpp"
#include "pdmp/tableau.hpp"
#include "pdmp/trajectory.hpp"

namespace pdmp {

/// Pathwise error functionals for one (reference, approximation) pair.
struct ErrorReport {
  double err_phase_jumps = 0.0;     // max_n |X(t_n) - X^(t^_n)| over post-jump states
  double err_jump_times = 0.0;      // max_n |t_n - t^_n|
  double err_endpoint = 0.0;        // |X(T) - X^(T)| by dense evaluation
  double err_sup_continuous = 0.0;  // max over probe grid of |Y(t) - Y^(t)|
  int discrete_mismatch_count = 0;  // jumps n <= N with differing post-jump theta
  int n_jumps_compared = 0;
};

/// Compares an approximation against a reference generated from the same
/// seed. The approximation must carry at least as many jumps as the reference
/// realized within [0, T]; otherwise a PairingError instructs rerunning with
/// min_jumps. Norms are Euclidean.
ErrorReport compare(const Trajectory& reference, const Trajectory& approx,
                    int n_eval_points = 10000);

struct OrderPoint {
  double h = 0.0;
  double error = 0.0;
  int mismatches = 0;
};

/// Least-squares slope of log(error) against log(h). Drops points with
/// discrete mismatches and points at or below 10x the reference's
/// self-consistency floor; throws InsufficientDataError (listing the filter
/// reasons) when fewer than 3 usable points remain.
double estimate_order(const std::vector<OrderPoint>& points, double floor);

/// Reference specification for a convergence study: either the model's
/// analytic solution or a high-accuracy numerical run.
struct ReferenceSpec {
  enum class Kind { Analytic, Numeric } kind = Kind::Numeric;
  BuiltinTableau tableau = BuiltinTableau::LobattoIIIA3;
  double h_ref = 5e-6;
  /// Estimate the reference's own error by comparing against a companion run
  /// at twice the step size (Richardson); the filter floor is 10x of it.
  bool richardson_floor = true;
};

struct StudyConfig {
  std::vector<BuiltinTableau> methods;
  std::vector<double> h_list;  // strictly decreasing
  double horizon = 0.0;
  std::uint64_t seed = 0;
  ReferenceSpec reference;
  int n_eval_points = 10000;
};

struct StudyRow {
  BuiltinTableau method = BuiltinTableau::Euler;
  double h = 0.0;
  ErrorReport report;
  double wall_time_s = 0.0;
};

struct MethodSlopes {
  std::optional<double> phase_jumps;
  std::optional<double> jump_times;
  std::optional<double> endpoint;
  std::optional<double> sup_continuous;
  /// Largest h in the list such that every h' <= h has zero mismatches.
  std::optional<double> h_star;
};

struct StudyResult {
  std::vector<StudyRow> rows;  // sorted by method, then h descending
  std::vector<std::pair<BuiltinTableau, MethodSlopes>> slopes;
  /// Richardson estimate of the reference's own error per functional
  /// (all zero for analytic references).
  ErrorReport reference_floor;
  std::size_t reference_jumps = 0;
  double reference_wall_time_s = 0.0;
};

/// One reference run, then one approximation per (method, h) with the same
/// seed; assembles the error table, per-method slopes and the
/// mismatch-vanishing threshold h*.
StudyResult convergence_study(const PdmpModel& model, const StudyConfig& config);

}  // namespace pdmp
