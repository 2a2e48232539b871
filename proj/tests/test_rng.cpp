#include <doctest.h>

#include <cmath>

#include "snds/rng.hpp"

using snds::Rng;

TEST_CASE("streams are deterministic in their indices") {
  Rng a = Rng::stream(42, 3, 7, 1);
  Rng b = Rng::stream(42, 3, 7, 1);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng c = Rng::stream(42, 3, 8, 1);
  Rng d = Rng::stream(43, 3, 7, 1);
  Rng e = Rng::stream(42, 4, 7, 1);
  Rng f = Rng::stream(42, 3, 7, 2);
  Rng base = Rng::stream(42, 3, 7, 1);
  const std::uint64_t first = base.next_u64();
  CHECK(c.next_u64() != first);
  CHECK(d.next_u64() != first);
  CHECK(e.next_u64() != first);
  CHECK(f.next_u64() != first);
}

TEST_CASE("uniform stays in [0,1)") {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal draws have standard moments") {
  Rng rng(7);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / n));
}

TEST_CASE("normal_fill matches scalar draws") {
  Rng a = Rng::stream(5, 0, 0, 0);
  Rng b = Rng::stream(5, 0, 0, 0);
  Eigen::VectorXd v(5);
  a.normal_fill(v);
  for (int i = 0; i < 5; ++i) CHECK(v[i] == b.normal());
}
