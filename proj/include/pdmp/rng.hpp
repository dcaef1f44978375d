#pragma once

#include <cstdint>

namespace pdmp {

/// Read-only source of i.i.d. standard uniforms addressed by draw index.
///
/// Simulations never consume uniforms sequentially from a hidden iterator;
/// they ask for "the k-th draw of this realization". That is what makes two
/// runs with different step sizes replay the same randomness: the n-th jump
/// always uses draws 2n-2 (waiting time) and 2n-1 (jump height), no matter
/// how many integration steps happened in between.
class UniformSource {
 public:
  virtual ~UniformSource() = default;

  /// The index-th uniform of the stream, strictly inside (0,1).
  virtual double at(std::uint64_t index) const = 0;
};

/// Counter-based uniform stream: the value at index k is a pure function of
/// (seed, k), identical across runs and platforms.
///
/// Uses the splitmix64 output function on seed + (k+1)*gamma. Raw 64-bit
/// words are mapped to (0,1) by ((bits >> 12) + 0.5) / 2^52, so 0 and 1 are
/// unreachable and -log(u) is always finite.
class UniformStream final : public UniformSource {
 public:
  explicit UniformStream(std::uint64_t seed) : seed_(seed) {}

  double at(std::uint64_t index) const override;

  /// Sequential convenience: returns at(next_index) and advances the cursor.
  double next() { return at(next_index_++); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_index() const { return next_index_; }
  void reset_cursor(std::uint64_t index = 0) { next_index_ = index; }

 private:
  std::uint64_t seed_;
  std::uint64_t next_index_ = 0;
};

}  // namespace pdmp
