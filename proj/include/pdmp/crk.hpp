#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pdmp/tableau.hpp"

namespace pdmp {

/// Right-hand side of an ODE system: writes f(t, y) into dydt.
using RhsFn =
    std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Stage derivative values f(t + c_i h, k_i), i = 1..s, for one step.
/// Retaining these is all that is needed to evaluate the step's interpolant.
struct StageData {
  int stages = 0;
  int dim = 0;
  std::vector<double> deriv;  // stages * dim, row-major

  std::span<const double> stage(int i) const {
    return {deriv.data() + static_cast<std::size_t>(i) * dim,
            static_cast<std::size_t>(dim)};
  }
};

/// Solves the stage equations k_i = y + h sum_j a_ij f(t + c_j h, k_j) and
/// returns the stage derivatives. Explicit tableaus use forward substitution.
/// Implicit tableaus use Newton iteration with a forward-difference Jacobian
/// (fallback: damped fixed point if the Newton matrix is singular) until the
/// stage residual satisfies |G|_inf <= 1e-12 * max(1, |y|_inf); throws
/// StepError after 50 iterations without convergence.
StageData solve_stages(const ButcherTableau& tableau, const RhsFn& rhs, double t,
                       std::span<const double> y, double h);

/// One step of the method: y_next = y + h sum_i beta_i f(t + c_i h, k_i).
/// If stage_data is non-null the stage derivatives are stored there for
/// later dense evaluation.
std::vector<double> step(const ButcherTableau& tableau, const RhsFn& rhs, double t,
                         std::span<const double> y, double h,
                         StageData* stage_data = nullptr);

/// In-step interpolant, Eq-style: y(t + xi h) = y + h sum_i b_i(xi) f_i,
/// 0 <= xi <= 1. Writes the result into out (same length as y).
void dense_step_eval(const ButcherTableau& tableau, const StageData& stage_data,
                     std::span<const double> y, double h, double xi,
                     std::span<double> out);

}  // namespace pdmp
