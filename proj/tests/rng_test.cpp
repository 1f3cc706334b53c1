#include <doctest.h>

#include <cmath>
#include <set>

#include "logicut/rng.hpp"

using logicut::Rng;

TEST_CASE("identical seeds reproduce the exact stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  Rng c(42), d(43);
  int differing = 0;
  for (int i = 0; i < 100; ++i) {
    if (c.next_u64() != d.next_u64()) ++differing;
  }
  CHECK(differing > 90);
}

TEST_CASE("uniform stays in [0,1) and looks flat") {
  Rng rng(7);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 5e-3);
}

TEST_CASE("uniform_int covers the closed range") {
  Rng rng(11);
  std::set<int> seen;
  for (int i = 0; i < 2000; ++i) {
    int v = rng.uniform_int(3, 7);
    REQUIRE(v >= 3);
    REQUIRE(v <= 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 5);
  for (int i = 0; i < 50; ++i) CHECK(rng.uniform_int(4, 4) == 4);
}

TEST_CASE("bernoulli frequency tracks p") {
  Rng rng(5);
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += rng.bernoulli(0.3) ? 1 : 0;
  CHECK(std::abs(hits / double(n) - 0.3) < 0.01);
  for (int i = 0; i < 100; ++i) {
    CHECK_FALSE(rng.bernoulli(0.0));
    CHECK(rng.bernoulli(1.0));
  }
}

TEST_CASE("normal has roughly standard moments") {
  Rng rng(17);
  const int n = 200000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double v = rng.normal();
    s1 += v;
    s2 += v * v;
  }
  CHECK(std::abs(s1 / n) < 0.02);
  CHECK(std::abs(s2 / n - 1.0) < 0.03);
  Rng rng2(17);
  double shifted = rng2.normal(10.0, 0.5);
  Rng rng3(17);
  CHECK(shifted == doctest::Approx(10.0 + 0.5 * rng3.normal()));
}

TEST_CASE("subseed decorrelates trials but stays deterministic") {
  CHECK(logicut::subseed(9, 0) == logicut::subseed(9, 0));
  CHECK(logicut::subseed(9, 0) != logicut::subseed(9, 1));
  CHECK(logicut::subseed(9, 1) != logicut::subseed(10, 1));
}

TEST_CASE("round_half_away rounds halves away from zero") {
  CHECK(logicut::round_half_away(0.5) == 1.0);
  CHECK(logicut::round_half_away(-0.5) == -1.0);
  CHECK(logicut::round_half_away(0.49) == 0.0);
  CHECK(logicut::round_half_away(1.5) == 2.0);
}
