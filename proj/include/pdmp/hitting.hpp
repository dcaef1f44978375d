#pragma once

#include <optional>

#include "pdmp/core.hpp"
#include "pdmp/crk.hpp"
#include "pdmp/trajectory.hpp"

namespace pdmp {

/// Location of the first time the accumulated hazard reaches the threshold.
struct CrossingResult {
  double tau_hat = 0.0;          // time from segment start to the crossing
  PdmpState state_at_crossing;   // dense (y, theta) at tau_hat
  double w_at_crossing = 0.0;    // dense w at tau_hat (== threshold to tolerance)
};

/// Result of integrating the augmented system up to a crossing or a time cap.
struct ThresholdSearch {
  std::optional<CrossingResult> crossing;  // empty: cap reached first
  DenseSegment segment;                    // record up to the crossing / cap
};

struct IntegrateOptions {
  bool record_dense = true;
};

/// Advances the augmented system (y', theta', w') = (f1, f2, lambda) from
/// (x0, w = 0) in steps of h, splitting steps at the model's input
/// breakpoints and at t_cap. On the first step whose right grid value of
/// w-hat reaches the threshold, the crossing is located inside the step and
/// returned; if t_cap is reached first the partial segment is returned.
///
/// Times are absolute: the search starts at t_offset and never runs past
/// t_cap (pass +infinity for an uncapped search).
ThresholdSearch integrate_until_threshold(const PdmpModel& model,
                                          const ButcherTableau& tableau,
                                          const PdmpState& x0, double threshold,
                                          double h, double t_offset, double t_cap,
                                          const IntegrateOptions& opts = {});

/// Leftmost xi in (0,1] with dense w-hat(xi) = threshold, given the stage
/// data of one step with w-hat(1) >= threshold > w_left. Scans g(xi) at
/// xi = j/8 and bisects the first sign-change bracket for 60 iterations.
/// The w component is the last entry of the stage vectors.
double find_crossing_in_step(const ButcherTableau& tableau, const StageData& stages,
                             double w_left, double h, double threshold);

}  // namespace pdmp
