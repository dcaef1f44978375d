#include "pdmp/core.hpp"

#include <cmath>

#include "pdmp/errors.hpp"

namespace pdmp {

std::vector<double> PdmpState::packed() const {
  std::vector<double> x;
  x.reserve(y.size() + theta.size());
  x.insert(x.end(), y.begin(), y.end());
  x.insert(x.end(), theta.begin(), theta.end());
  return x;
}

PdmpState PdmpState::unpack(std::span<const double> x, int d, int m) {
  PdmpState s;
  s.y.assign(x.begin(), x.begin() + d);
  s.theta.assign(x.begin() + d, x.begin() + d + m);
  return s;
}

std::vector<double> sample_jump_height(const JumpKernel& kernel, const PdmpState& x,
                                       double u) {
  return sample_jump_height(kernel, x, u, nullptr);
}

std::vector<double> sample_jump_height(const JumpKernel& kernel, const PdmpState& x,
                                       double u, int* height_index) {
  if (!(u > 0.0 && u < 1.0))
    throw DomainError("sample_jump_height: u must lie in the open interval (0,1)");

  if (const auto* cont = std::get_if<ContinuousKernel>(&kernel)) {
    if (height_index != nullptr) *height_index = -1;
    return cont->height(x, u);
  }

  const auto& disc = std::get<DiscreteKernel>(kernel);
  const std::vector<WeightedHeight> heights = disc.heights(x);

  double total = 0.0;
  for (const WeightedHeight& wh : heights) {
    if (wh.probability < 0.0)
      throw ModelError("sample_jump_height: negative point probability");
    total += wh.probability;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ModelError("sample_jump_height: point probabilities sum to " +
                     std::to_string(total) + ", expected 1");

  // H(x, u) = k_i for the unique i with sum_{j<i} p_j <= u < sum_{j<=i} p_j,
  // scanning in the kernel's enumeration order.
  double cum = 0.0;
  int last_positive = -1;
  for (std::size_t i = 0; i < heights.size(); ++i) {
    const double p = heights[i].probability;
    if (p > 0.0) last_positive = static_cast<int>(i);
    const double next = cum + p;
    if (u >= cum && u < next) {
      if (height_index != nullptr) *height_index = static_cast<int>(i);
      return heights[i].height;
    }
    cum = next;
  }
  // u >= cum can happen by rounding when u is within ~1e-12 of 1; the last
  // positive-probability height owns the top of the interval.
  if (last_positive < 0)
    throw ModelError("sample_jump_height: kernel has no positive-probability height");
  if (height_index != nullptr) *height_index = last_positive;
  return heights[static_cast<std::size_t>(last_positive)].height;
}

}  // namespace pdmp
