#include "pdmp/rng.hpp"

namespace pdmp {

namespace {

// splitmix64 finalizer (Steele, Lea, Flood 2014). Passes BigCrush when driven
// by a Weyl sequence, which is exactly how it is used here.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

double UniformStream::at(std::uint64_t index) const {
  const std::uint64_t gamma = 0x9E3779B97F4A7C15ULL;
  const std::uint64_t bits = mix64(seed_ + (index + 1) * gamma);
  // Top 52 bits, centered on the lattice: never 0, never 1.
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1p-52;
}

}  // namespace pdmp
