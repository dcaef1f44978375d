#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pdmp/rng.hpp"

using pdmp::UniformStream;

TEST_CASE("same (seed, index) is bit-identical") {
  UniformStream a(1);
  UniformStream b(1);
  CHECK(a.at(0) == b.at(0));
  for (std::uint64_t k : {0ull, 1ull, 17ull, 123456789ull})
    CHECK(a.at(k) == b.at(k));
}

TEST_CASE("different seeds give different values at the same index") {
  UniformStream a(1);
  UniformStream b(2);
  CHECK(a.at(5) != b.at(5));
}

TEST_CASE("values lie strictly inside (0,1)") {
  UniformStream s(99);
  for (std::uint64_t k = 0; k < 10000; ++k) {
    const double u = s.at(k);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("index addressability: access order does not matter") {
  UniformStream s(7);
  std::vector<double> sequential;
  for (std::uint64_t k = 0; k < 64; ++k) sequential.push_back(s.at(k));
  // Query backwards and interleaved.
  for (std::uint64_t k = 64; k-- > 0;) CHECK(s.at(k) == sequential[k]);
  for (std::uint64_t k = 1; k < 64; k += 2) CHECK(s.at(k) == sequential[k]);
  // The sequential cursor agrees with direct indexing.
  UniformStream t(7);
  for (std::uint64_t k = 0; k < 64; ++k) CHECK(t.next() == sequential[k]);
  CHECK(t.next_index() == 64);
}

TEST_CASE("empirical uniformity: KS statistic below the 1% critical value") {
  const std::size_t n = 1000000;
  UniformStream s(424242);
  std::vector<double> u(n);
  for (std::size_t k = 0; k < n; ++k) u[k] = s.at(k);
  std::sort(u.begin(), u.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(u[i] - lo, hi - u[i]));
  }
  // 1% critical value of the one-sample KS statistic, asymptotic form.
  const double critical = 1.6276 / std::sqrt(static_cast<double>(n));
  CHECK(d < critical);
}
