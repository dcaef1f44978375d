#pragma once

#include <cstdint>
#include <optional>

#include "pdmp/core.hpp"
#include "pdmp/rng.hpp"
#include "pdmp/tableau.hpp"
#include "pdmp/trajectory.hpp"

namespace pdmp {

struct SimulationConfig {
  BuiltinTableau tableau = BuiltinTableau::LobattoIIIA3;
  double h = 1e-3;
  double horizon = 1.0;
  std::uint64_t seed = 0;  // informational; the stream supplies the draws
  /// Continue past the horizon until at least this many jumps were realized
  /// (used when pairing an approximation against a reference).
  std::optional<std::size_t> min_jumps;
  bool record_dense = true;
};

/// Approximate PDMP path: for jump n the waiting time is the hitting time of
/// -log(stream.at(2n-2)) by the numerically integrated hazard, and the jump
/// height is drawn with stream.at(2n-1) at the dense pre-jump state. Stops at
/// the horizon (final partial segment recorded) once any requested minimum
/// jump count has been reached.
Trajectory simulate_approx(const PdmpModel& model, const SimulationConfig& cfg,
                           const UniformSource& stream);

/// Exact path for models carrying closed-form flow and hazard inverse; the
/// same draws produce the same realization omega as simulate_approx. Throws
/// ModelError for models without an analytic solution.
Trajectory simulate_exact_analytic(const PdmpModel& model, double horizon,
                                   const UniformSource& stream,
                                   std::optional<std::size_t> min_jumps = {});

/// High-accuracy comparator when no analytic solution exists: LobattoIIIA
/// with a very small reference step size.
Trajectory simulate_reference(const PdmpModel& model, double horizon,
                              const UniformSource& stream, double h_ref = 5e-6,
                              std::optional<std::size_t> min_jumps = {});

}  // namespace pdmp
